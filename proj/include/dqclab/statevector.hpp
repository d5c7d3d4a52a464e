#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dqclab {

// Dense amplitudes over n qubits, little-endian: basis index bit i is qubit i.
template <typename Real>
struct BasicStateVector {
  using Scalar = std::complex<Real>;
  using Amplitudes = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  int n_qubits = 0;
  Amplitudes amps;

  static BasicStateVector zero(int n) {
    BasicStateVector s;
    s.n_qubits = n;
    s.amps = Amplitudes::Zero(Eigen::Index{1} << n);
    s.amps(0) = Scalar(1);
    return s;
  }

  Real norm() const { return amps.norm(); }
};

using StateVector = BasicStateVector<double>;

// |<a|b>|^2 for states of equal width.
template <typename Real>
Real fidelity(const BasicStateVector<Real>& a, const BasicStateVector<Real>& b) {
  return std::norm(a.amps.dot(b.amps));
}

}  // namespace dqclab
