#include "dqclab/ansatz.hpp"

#include <stdexcept>
#include <string>

namespace dqclab {

std::string_view to_string(ArchitectureKind kind) {
  switch (kind) {
    case ArchitectureKind::Baseline: return "baseline";
    case ArchitectureKind::FullyEntangled: return "fully_entangled";
    case ArchitectureKind::Alternating: return "alternating";
    case ArchitectureKind::Alternating2: return "alternating2";
  }
  return "?";
}

const std::vector<ArchitectureKind>& all_architecture_kinds() {
  static const std::vector<ArchitectureKind> kinds{
      ArchitectureKind::Baseline, ArchitectureKind::FullyEntangled, ArchitectureKind::Alternating,
      ArchitectureKind::Alternating2};
  return kinds;
}

ArchitectureKind parse_architecture_kind(std::string_view name) {
  for (ArchitectureKind k : all_architecture_kinds())
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown architecture '" + std::string(name) + "'");
}

void Architecture::validate() const {
  if (n_qubits < 2) throw std::invalid_argument("architecture needs at least two qubits");
  if (n_layers < 0) throw std::invalid_argument("negative layer count");
  if (kind == ArchitectureKind::Alternating2 && global_period < 1)
    throw std::invalid_argument("global_period must be positive");
  if (measured_qubits.size() != 2) throw std::invalid_argument("readout needs exactly K = 2 qubits");
  for (int q : measured_qubits)
    if (q < 0 || q >= n_qubits) throw std::out_of_range("measured qubit out of range");
  if (measured_qubits[0] == measured_qubits[1])
    throw std::invalid_argument("measured qubits must differ");
}

Architecture make_architecture(ArchitectureKind kind, int n_qubits, int n_layers) {
  Architecture a;
  a.kind = kind;
  a.n_qubits = n_qubits;
  a.n_layers = n_layers;
  return a;
}

int parameter_count(const Architecture& arch) { return arch.n_qubits * arch.n_layers; }

namespace {

void chain(Circuit& c, int n) {
  for (int i = 0; i + 1 < n; ++i) c.append(Gate::cx(i, i + 1));
}

void local_column(Circuit& c, int n) {
  for (int i = 0; i + 1 < n; i += 2) c.append(Gate::cx(i, i + 1));
}

// Links neighbouring pairs; the last qubit gets no CX when n is even.
void global_column(Circuit& c, int n) {
  for (int i = 1; i + 1 < n; i += 2) c.append(Gate::cx(i, i + 1));
}

void rotations(Circuit& c, int n, int layer) {
  for (int i = 0; i < n; ++i) c.append(Gate::ry(i, ParameterRef{ParamSpace::Theta, layer * n + i}));
}

}  // namespace

Circuit build(const Architecture& arch) {
  arch.validate();
  const int n = arch.n_qubits;
  const int k = static_cast<int>(arch.measured_qubits.size());
  Circuit c(n, k, n, parameter_count(arch));

  for (int i = 0; i < n; ++i) c.append(Gate::ry(i, ParameterRef{ParamSpace::Data, i}));

  if (arch.kind == ArchitectureKind::FullyEntangled)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) c.append(Gate::cx(i, j));

  for (int l = 0; l < arch.n_layers; ++l) {
    switch (arch.kind) {
      case ArchitectureKind::Baseline:
        chain(c, n);
        break;
      case ArchitectureKind::FullyEntangled:
        break;
      case ArchitectureKind::Alternating:
        if (l % 2 == 0)
          chain(c, n);
        else
          local_column(c, n);
        break;
      case ArchitectureKind::Alternating2:
        local_column(c, n);
        if (l % arch.global_period == 0) global_column(c, n);
        break;
    }
    rotations(c, n, l);
  }

  for (int i = 0; i < k; ++i) c.append(Gate::measure(arch.measured_qubits[i], i));
  return c;
}

EntanglingCensus entangling_gate_census(const Architecture& arch) {
  arch.validate();
  const int n = arch.n_qubits;
  const int layers = arch.n_layers;
  // Chain (i, i+1) crosses a pair boundary exactly when i is odd.
  const int chain_total = n - 1, chain_cross = (n - 1) / 2;
  const int local_total = n / 2;
  const int global_total = (n - 1) / 2;

  switch (arch.kind) {
    case ArchitectureKind::Baseline:
      return {layers * chain_total, layers * chain_cross};
    case ArchitectureKind::FullyEntangled: {
      const int all_pairs = n * (n - 1) / 2;
      return {all_pairs, all_pairs - local_total};
    }
    case ArchitectureKind::Alternating: {
      const int global_layers = (layers + 1) / 2;
      const int local_layers = layers / 2;
      return {global_layers * chain_total + local_layers * local_total,
              global_layers * chain_cross};
    }
    case ArchitectureKind::Alternating2: {
      const int global_layers = layers == 0 ? 0 : (layers - 1) / arch.global_period + 1;
      return {layers * local_total + global_layers * global_total, global_layers * global_total};
    }
  }
  return {};
}

}  // namespace dqclab
