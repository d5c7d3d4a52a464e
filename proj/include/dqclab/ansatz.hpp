#pragma once

#include <string_view>
#include <vector>

#include "dqclab/circuit.hpp"

namespace dqclab {

enum class ArchitectureKind { Baseline, FullyEntangled, Alternating, Alternating2 };

std::string_view to_string(ArchitectureKind kind);
// Accepts "baseline" | "fully_entangled" | "alternating" | "alternating2".
ArchitectureKind parse_architecture_kind(std::string_view name);
const std::vector<ArchitectureKind>& all_architecture_kinds();

// One of the four ansatz families. Qubits are grouped into QPU pairs
// {0,1 | 2,3 | ...}; "global" entanglers cross those pairs, "local" ones do not.
struct Architecture {
  ArchitectureKind kind = ArchitectureKind::Baseline;
  int n_qubits = 8;
  int n_layers = 10;
  // Alternating2 only: a global column is added on layers l with l % period == 0.
  int global_period = 4;
  std::vector<int> measured_qubits{0, 1};

  void validate() const;
};

Architecture make_architecture(ArchitectureKind kind, int n_qubits = 8, int n_layers = 10);

// Symbolic circuit: RY(x_i) encoding, entangling pattern plus RY(theta) per
// layer, terminal MEASURE of measured_qubits[k] into clbit k.
Circuit build(const Architecture& arch);

int parameter_count(const Architecture& arch);

struct EntanglingCensus {
  int total_cx = 0;
  int cross_qpu_cx = 0;
};

// Closed-form CX counts for the pair partition (no circuit is built).
EntanglingCensus entangling_gate_census(const Architecture& arch);

}  // namespace dqclab
