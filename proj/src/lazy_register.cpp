#include "dqclab/lazy_register.hpp"

#include <stdexcept>

#include "dqclab/kernels.hpp"

namespace dqclab {

LazyRegister::LazyRegister(int n_qubits)
    : amps_(Eigen::VectorXcd::Ones(1)), slot_of_(n_qubits, -1), bits_(n_qubits, 0) {
  if (n_qubits < 1) throw std::invalid_argument("register needs at least one qubit");
}

int LazyRegister::activate(int q) {
  if (slot_of_[q] >= 0) return slot_of_[q];
  const Eigen::Index old_size = amps_.size();
  Eigen::VectorXcd grown = Eigen::VectorXcd::Zero(2 * old_size);
  if (bits_[q])
    grown.tail(old_size) = amps_;
  else
    grown.head(old_size) = amps_;
  amps_.swap(grown);
  const int slot = active_count();
  slot_of_[q] = slot;
  qubit_of_slot_.push_back(q);
  return slot;
}

void LazyRegister::apply_h(int q) {
  const int s = activate(q);
  kernels::apply_single_qubit(amps_, s, kernels::hadamard_matrix<double>());
}

void LazyRegister::apply_ry(int q, double angle) {
  const int s = activate(q);
  kernels::apply_single_qubit(amps_, s, kernels::ry_matrix(angle));
}

void LazyRegister::apply_x(int q) {
  if (slot_of_[q] < 0)
    bits_[q] ^= 1;
  else
    kernels::apply_pauli_x(amps_, slot_of_[q]);
}

void LazyRegister::apply_y(int q) {
  if (slot_of_[q] < 0) {
    // Y|0> = i|1>, Y|1> = -i|0>
    amps_ *= bits_[q] ? std::complex<double>(0, -1) : std::complex<double>(0, 1);
    bits_[q] ^= 1;
  } else {
    kernels::apply_pauli_y(amps_, slot_of_[q]);
  }
}

void LazyRegister::apply_z(int q) {
  if (slot_of_[q] < 0) {
    if (bits_[q]) amps_ = -amps_;
  } else {
    kernels::apply_pauli_z(amps_, slot_of_[q]);
  }
}

void LazyRegister::apply_cx(int control, int target) {
  if (slot_of_[control] < 0) {
    if (bits_[control]) apply_x(target);
    return;
  }
  const int t = activate(target);
  kernels::apply_cx(amps_, slot_of_[control], t);
}

double LazyRegister::probability_one(int q) const {
  if (slot_of_[q] < 0) return bits_[q] ? 1.0 : 0.0;
  return kernels::probability_one(amps_, slot_of_[q]);
}

double LazyRegister::expectation_z(int q) const {
  if (slot_of_[q] < 0) return bits_[q] ? -1.0 : 1.0;
  return kernels::expectation_z(amps_, slot_of_[q]);
}

void LazyRegister::collapse(int q, int outcome) {
  const int s = slot_of_[q];
  if (s < 0) {
    if (bits_[q] != outcome) throw std::logic_error("collapse onto a zero-probability outcome");
    return;
  }
  const Eigen::Index half = amps_.size() / 2;
  const Eigen::Index low_mask = (Eigen::Index{1} << s) - 1;
  const Eigen::Index picked = static_cast<Eigen::Index>(outcome) << s;
  Eigen::VectorXcd shrunk(half);
  for (Eigen::Index i = 0; i < half; ++i) shrunk(i) = amps_(((i & ~low_mask) << 1) | picked | (i & low_mask));
  // Normalize by the kept half itself: deriving it from 1 - p1 would amplify any
  // norm drift at every measurement.
  const double kept = shrunk.norm();
  if (kept <= 0.0) throw std::logic_error("collapse onto a zero-probability outcome");
  shrunk /= kept;
  amps_.swap(shrunk);

  qubit_of_slot_.erase(qubit_of_slot_.begin() + s);
  for (int k = s; k < active_count(); ++k) slot_of_[qubit_of_slot_[k]] = k;
  slot_of_[q] = -1;
  bits_[q] = static_cast<std::uint8_t>(outcome);
}

void LazyRegister::reset_to_zero(int q, int outcome) {
  collapse(q, outcome);
  bits_[q] = 0;
}

StateVector LazyRegister::to_dense() const {
  const int n = n_qubits();
  StateVector out;
  out.n_qubits = n;
  out.amps = StateVector::Amplitudes::Zero(Eigen::Index{1} << n);
  Eigen::Index classical = 0;
  for (int q = 0; q < n; ++q)
    if (slot_of_[q] < 0 && bits_[q]) classical |= Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    Eigen::Index full = classical;
    for (int s = 0; s < active_count(); ++s)
      if (i & (Eigen::Index{1} << s)) full |= Eigen::Index{1} << qubit_of_slot_[s];
    out.amps(full) = amps_(i);
  }
  return out;
}

bool LazyRegister::same_layout(const LazyRegister& other) const {
  if (qubit_of_slot_ != other.qubit_of_slot_ || n_qubits() != other.n_qubits()) return false;
  for (int q = 0; q < n_qubits(); ++q)
    if (slot_of_[q] < 0 && bits_[q] != other.bits_[q]) return false;
  return true;
}

std::complex<double> LazyRegister::overlap(const LazyRegister& other) const {
  return amps_.dot(other.amps_);
}

}  // namespace dqclab
