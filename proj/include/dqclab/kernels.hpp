#pragma once

// Dense statevector kernels. Amplitude index bit i is qubit (slot) i.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace dqclab::kernels {

template <typename Real>
Eigen::Matrix<Real, 2, 2> ry_matrix(Real angle) {
  const Real c = std::cos(angle / 2), s = std::sin(angle / 2);
  Eigen::Matrix<Real, 2, 2> m;
  m << c, -s, s, c;
  return m;
}

template <typename Real>
Eigen::Matrix<Real, 2, 2> hadamard_matrix() {
  const Real r = Real(1) / std::sqrt(Real(2));
  Eigen::Matrix<Real, 2, 2> m;
  m << r, r, r, -r;
  return m;
}

template <typename Derived, typename U>
void apply_single_qubit(Eigen::MatrixBase<Derived>& amps, int bit, const Eigen::MatrixBase<U>& u) {
  const Eigen::Index stride = Eigen::Index{1} << bit;
  const Eigen::Index n = amps.size();
  const auto u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  for (Eigen::Index base = 0; base < n; base += 2 * stride) {
    for (Eigen::Index i = base; i < base + stride; ++i) {
      const auto a0 = amps(i);
      const auto a1 = amps(i + stride);
      amps(i) = u00 * a0 + u01 * a1;
      amps(i + stride) = u10 * a0 + u11 * a1;
    }
  }
}

template <typename Derived>
void apply_cx(Eigen::MatrixBase<Derived>& amps, int control_bit, int target_bit) {
  const Eigen::Index cmask = Eigen::Index{1} << control_bit;
  const Eigen::Index tmask = Eigen::Index{1} << target_bit;
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    if ((i & cmask) && !(i & tmask)) std::swap(amps(i), amps(i | tmask));
}

template <typename Derived>
void apply_pauli_x(Eigen::MatrixBase<Derived>& amps, int bit) {
  const Eigen::Index mask = Eigen::Index{1} << bit;
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    if (!(i & mask)) std::swap(amps(i), amps(i | mask));
}

template <typename Derived>
void apply_pauli_z(Eigen::MatrixBase<Derived>& amps, int bit) {
  const Eigen::Index mask = Eigen::Index{1} << bit;
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    if (i & mask) amps(i) = -amps(i);
}

// Y = [[0, -i], [i, 0]].
template <typename Derived>
void apply_pauli_y(Eigen::MatrixBase<Derived>& amps, int bit) {
  using Scalar = typename Derived::Scalar;
  const Scalar i_unit(0, 1);
  const Eigen::Index mask = Eigen::Index{1} << bit;
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    const Scalar a0 = amps(i);
    const Scalar a1 = amps(i | mask);
    amps(i) = -i_unit * a1;
    amps(i | mask) = i_unit * a0;
  }
}

template <typename Derived>
auto probability_one(const Eigen::MatrixBase<Derived>& amps, int bit) {
  const Eigen::Index mask = Eigen::Index{1} << bit;
  typename Eigen::NumTraits<typename Derived::Scalar>::Real p = 0;
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    if (i & mask) p += std::norm(amps(i));
  return p;
}

// <Z> on one qubit: sum_b |a_b|^2 (+1 if bit clear, -1 if set).
template <typename Derived>
auto expectation_z(const Eigen::MatrixBase<Derived>& amps, int bit) {
  const Eigen::Index mask = Eigen::Index{1} << bit;
  typename Eigen::NumTraits<typename Derived::Scalar>::Real e = 0;
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    e += (i & mask) ? -std::norm(amps(i)) : std::norm(amps(i));
  return e;
}

}  // namespace dqclab::kernels
