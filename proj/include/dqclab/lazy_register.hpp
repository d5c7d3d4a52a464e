#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dqclab/statevector.hpp"

namespace dqclab {

// Statevector over a wide register that stores only the qubits that are not in
// a known computational-basis product state. Untouched qubits and qubits that
// were just measured or reset live outside the amplitude array as classical
// bits; they are folded in on the first gate that can create superposition.
//
// This keeps a 16-qubit distributed circuit (8 data + 8 communication qubits)
// at the cost of at most 8 + 2 active qubits, since communication qubits are
// always measured and reset at the end of each protocol.
class LazyRegister {
 public:
  explicit LazyRegister(int n_qubits);

  int n_qubits() const { return static_cast<int>(slot_of_.size()); }
  int active_count() const { return static_cast<int>(qubit_of_slot_.size()); }
  bool is_classical(int q) const { return slot_of_[q] < 0; }
  int classical_bit(int q) const { return bits_[q]; }

  void apply_h(int q);
  void apply_ry(int q, double angle);
  void apply_x(int q);
  void apply_y(int q);
  void apply_z(int q);
  void apply_cx(int control, int target);

  double probability_one(int q) const;
  double expectation_z(int q) const;

  // Projects qubit q onto |outcome>, renormalizes, and moves it out of the
  // amplitude array. The outcome must have nonzero probability.
  void collapse(int q, int outcome);
  // Collapse followed by |1> -> |0>.
  void reset_to_zero(int q, int outcome);

  double norm() const { return amps_.norm(); }
  StateVector to_dense() const;

  // True when both registers hold the same qubits in the same slots and agree on
  // every classical bit, so amplitudes are directly comparable.
  bool same_layout(const LazyRegister& other) const;
  std::complex<double> overlap(const LazyRegister& other) const;

 private:
  int activate(int q);

  Eigen::VectorXcd amps_;
  std::vector<int> slot_of_;        // -1 when the qubit is classical
  std::vector<int> qubit_of_slot_;
  std::vector<std::uint8_t> bits_;  // valid for classical qubits
};

}  // namespace dqclab
