#pragma once

#include <vector>

#include "dqclab/circuit.hpp"

namespace dqclab {

struct Topology {
  int n_qpus = 4;
  int data_per_qpu = 2;
  int comm_per_qpu = 2;

  int qubits_per_qpu() const { return data_per_qpu + comm_per_qpu; }
  int capacity() const { return n_qpus * data_per_qpu; }
  int physical_width() const { return n_qpus * qubits_per_qpu(); }
  void validate() const;
};

// Sequential allocation: logical data qubit d lives on QPU d / data_per_qpu.
// QPU k owns the contiguous physical block starting at k * qubits_per_qpu:
// its data qubits first, then its communication qubits.
class AllocationMap {
 public:
  AllocationMap(int n_logical, const Topology& topo);

  int n_logical() const { return static_cast<int>(logical_to_physical_.size()); }
  const Topology& topology() const { return topo_; }
  int physical(int logical) const { return logical_to_physical_.at(logical); }
  int qpu_of_logical(int logical) const { return logical / topo_.data_per_qpu; }
  int qpu_of(int physical) const;
  bool is_comm(int physical) const;
  const std::vector<int>& comm_qubits(int qpu) const { return comm_qubits_.at(qpu); }

 private:
  Topology topo_;
  std::vector<int> logical_to_physical_;
  std::vector<std::vector<int>> comm_qubits_;
};

// Throws std::invalid_argument when n_logical exceeds the data capacity.
AllocationMap allocate(int n_logical, const Topology& topo);

// The telegate: Bell pair on (comm_a, comm_b), local CX control->comm_a, measure
// comm_a, X-correct comm_b, CX comm_b->target, H and measure comm_b, Z-correct
// control, then reset both communication qubits. 11 gates.
std::vector<Gate> remote_cx_sequence(int control, int target, int comm_a, int comm_b,
                                     int clbit_m1, int clbit_m2);

inline constexpr int kRemoteCxGateCount = 11;

// Maps a logical circuit onto the physical register, replacing every cross-QPU
// CX with the telegate on the first communication qubit of each endpoint QPU.
// Readout bits keep their indices; each protocol takes two fresh bits after them.
Circuit transform(const Circuit& circuit, const Topology& topo);

// Number of CX gates whose endpoints sit on different QPUs. Circuits no wider
// than the data capacity are read as logical; circuits of physical width as
// physical, where each telegate contributes its one cross-QPU Bell-pair CX.
int count_remote(const Circuit& circuit, const Topology& topo);

}  // namespace dqclab
