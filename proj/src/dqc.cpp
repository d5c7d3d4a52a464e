#include "dqclab/dqc.hpp"

#include <stdexcept>
#include <string>

namespace dqclab {

void Topology::validate() const {
  if (n_qpus < 1) throw std::invalid_argument("topology needs at least one QPU");
  if (data_per_qpu < 1) throw std::invalid_argument("data_per_qpu must be at least 1");
  if (comm_per_qpu < 2) throw std::invalid_argument("comm_per_qpu must be at least 2");
}

AllocationMap::AllocationMap(int n_logical, const Topology& topo) : topo_(topo) {
  topo.validate();
  if (n_logical < 0) throw std::invalid_argument("negative logical qubit count");
  if (n_logical > topo.capacity())
    throw std::invalid_argument("capacity exceeded: " + std::to_string(n_logical) +
                                " logical qubits on " + std::to_string(topo.capacity()) +
                                " data slots");
  const int block = topo.qubits_per_qpu();
  for (int d = 0; d < n_logical; ++d) {
    const int qpu = d / topo.data_per_qpu;
    logical_to_physical_.push_back(qpu * block + d % topo.data_per_qpu);
  }
  comm_qubits_.resize(topo.n_qpus);
  for (int k = 0; k < topo.n_qpus; ++k)
    for (int j = 0; j < topo.comm_per_qpu; ++j)
      comm_qubits_[k].push_back(k * block + topo.data_per_qpu + j);
}

int AllocationMap::qpu_of(int physical) const {
  if (physical < 0 || physical >= topo_.physical_width())
    throw std::out_of_range("physical qubit out of range");
  return physical / topo_.qubits_per_qpu();
}

bool AllocationMap::is_comm(int physical) const {
  return physical % topo_.qubits_per_qpu() >= topo_.data_per_qpu;
}

AllocationMap allocate(int n_logical, const Topology& topo) { return AllocationMap(n_logical, topo); }

std::vector<Gate> remote_cx_sequence(int control, int target, int comm_a, int comm_b,
                                     int clbit_m1, int clbit_m2) {
  const int q[] = {control, target, comm_a, comm_b};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (q[i] == q[j]) throw std::invalid_argument("remote CX: qubit indices must be distinct");
  if (clbit_m1 == clbit_m2) throw std::invalid_argument("remote CX: classical bits must differ");

  return {
      Gate::h(comm_a),
      Gate::bell_cx(comm_a, comm_b),
      Gate::cx(control, comm_a),
      Gate::measure(comm_a, clbit_m1),
      Gate::x(comm_b, Condition{clbit_m1, 1}),
      Gate::cx(comm_b, target),
      Gate::h(comm_b),
      Gate::measure(comm_b, clbit_m2),
      Gate::z(control, Condition{clbit_m2, 1}),
      Gate::reset(comm_a),
      Gate::reset(comm_b),
  };
}

namespace {

void check_transformable(const Circuit& circuit) {
  const auto& gates = circuit.gates();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (g.condition || g.kind == GateKind::Reset)
      throw std::invalid_argument("transform: unsupported gate '" + dump_gate(g) + "'");
    if (g.kind != GateKind::Measure) continue;
    for (std::size_t j = i + 1; j < gates.size(); ++j)
      for (int k = 0; k < gates[j].arity(); ++k)
        if (gates[j].qubits[k] == g.qubits[0])
          throw std::invalid_argument("transform: only terminal measurements are supported");
  }
}

}  // namespace

Circuit transform(const Circuit& circuit, const Topology& topo) {
  check_transformable(circuit);
  const AllocationMap alloc = allocate(circuit.n_qubits(), topo);

  int cross = 0;
  for (const Gate& g : circuit.gates())
    if (g.kind == GateKind::CX &&
        alloc.qpu_of_logical(g.qubits[0]) != alloc.qpu_of_logical(g.qubits[1]))
      ++cross;

  Circuit out(topo.physical_width(), circuit.n_clbits() + 2 * cross, circuit.n_data_params(),
              circuit.n_theta_params());
  int next_clbit = circuit.n_clbits();
  for (Gate g : circuit.gates()) {
    if (g.kind == GateKind::CX) {
      const int qc = alloc.qpu_of_logical(g.qubits[0]);
      const int qt = alloc.qpu_of_logical(g.qubits[1]);
      if (qc != qt) {
        for (const Gate& p : remote_cx_sequence(alloc.physical(g.qubits[0]),
                                                alloc.physical(g.qubits[1]),
                                                alloc.comm_qubits(qc).front(),
                                                alloc.comm_qubits(qt).front(), next_clbit,
                                                next_clbit + 1))
          out.append(p);
        next_clbit += 2;
        continue;
      }
      g.qubits[1] = alloc.physical(g.qubits[1]);
    }
    g.qubits[0] = alloc.physical(g.qubits[0]);
    g.bell_pair = false;
    out.append(g);
  }
  return out;
}

int count_remote(const Circuit& circuit, const Topology& topo) {
  topo.validate();
  const int width = circuit.n_qubits();
  int group = 0;
  if (width <= topo.capacity())
    group = topo.data_per_qpu;
  else if (width == topo.physical_width())
    group = topo.qubits_per_qpu();
  else
    throw std::invalid_argument("count_remote: circuit width " + std::to_string(width) +
                                " matches neither logical capacity nor physical width");
  // In a physical circuit each telegate is announced by its Bell-pair CX.
  int n = 0;
  for (const Gate& g : circuit.gates())
    if (g.kind == GateKind::CX && g.qubits[0] / group != g.qubits[1] / group) ++n;
  return n;
}

}  // namespace dqclab
