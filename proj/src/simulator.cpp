#include "dqclab/simulator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dqclab/parallel.hpp"

namespace dqclab {

void NoiseConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise probability must lie in [0, 1]");
}

namespace {

constexpr double kNormTolerance = 1e-6;
constexpr double kBranchCutoff = 1e-14;

double literal_angle(const Gate& g) {
  if (g.is_symbolic()) throw std::invalid_argument("simulation requires a bound circuit");
  return std::get<double>(*g.angle);
}

// Applies a unitary gate; returns false when a classical condition suppresses it.
bool apply_unitary(const Gate& g, LazyRegister& reg, const std::vector<std::uint8_t>& clbits) {
  if (g.condition && clbits[g.condition->clbit] != g.condition->value) return false;
  const int q = g.qubits[0];
  switch (g.kind) {
    case GateKind::H: reg.apply_h(q); break;
    case GateKind::X: reg.apply_x(q); break;
    case GateKind::Z: reg.apply_z(q); break;
    case GateKind::RY: reg.apply_ry(q, literal_angle(g)); break;
    case GateKind::CX: reg.apply_cx(g.qubits[0], g.qubits[1]); break;
    default: throw std::logic_error("apply_unitary on non-unitary gate");
  }
  return true;
}

void apply_pauli(LazyRegister& reg, int q, std::uint64_t which) {
  switch (which) {
    case 1: reg.apply_x(q); break;
    case 2: reg.apply_y(q); break;
    case 3: reg.apply_z(q); break;
    default: break;
  }
}

void maybe_depolarize(const Gate& g, const NoiseConfig& noise, LazyRegister& reg,
                      RandomStream& rng, NoiseTally& tally) {
  const bool two = g.kind == GateKind::CX;
  if (two ? !noise.two_qubit_gates : !noise.single_qubit_gates) return;
  if (!(rng.uniform() < noise.p)) return;
  ++tally.events;
  if (two) {
    const std::uint64_t k = rng.below(16);
    apply_pauli(reg, g.qubits[0], k / 4);
    apply_pauli(reg, g.qubits[1], k % 4);
    if (k != 0) ++tally.paulis;
  } else {
    const std::uint64_t k = rng.below(4);
    apply_pauli(reg, g.qubits[0], k);
    if (k != 0) ++tally.paulis;
  }
}

void execute(const Circuit& circuit, const NoiseConfig& noise, RandomStream& rng,
             LazyRegister& reg, std::vector<std::uint8_t>& clbits, NoiseTally& tally) {
  for (const Gate& g : circuit.gates()) {
    const int q = g.qubits[0];
    if (g.kind == GateKind::Measure) {
      const int outcome = rng.uniform() < reg.probability_one(q) ? 1 : 0;
      reg.collapse(q, outcome);
      clbits[*g.clbit] = static_cast<std::uint8_t>(outcome);
    } else if (g.kind == GateKind::Reset) {
      if (reg.is_classical(q)) {
        reg.reset_to_zero(q, reg.classical_bit(q));
      } else {
        const int outcome = rng.uniform() < reg.probability_one(q) ? 1 : 0;
        reg.reset_to_zero(q, outcome);
      }
    } else if (apply_unitary(g, reg, clbits) && noise.enabled) {
      maybe_depolarize(g, noise, reg, rng, tally);
    }
  }
  if (std::abs(reg.norm() - 1.0) > kNormTolerance)
    throw std::runtime_error("statevector norm drifted beyond tolerance");
}

void require_bound(const Circuit& circuit) {
  if (!circuit.is_bound()) throw std::invalid_argument("simulation requires a bound circuit");
}

}  // namespace

RunOutcome run_once(const Circuit& circuit, const NoiseConfig& noise, RandomStream& rng) {
  require_bound(circuit);
  noise.validate();
  LazyRegister reg(circuit.n_qubits());
  RunOutcome out;
  out.clbits.assign(circuit.n_clbits(), 0);
  execute(circuit, noise, rng, reg, out.clbits, out.noise);
  out.state = reg.to_dense();
  return out;
}

ShotResult sample(const Circuit& circuit, int shots, const NoiseConfig& noise,
                  std::uint64_t base_seed, std::span<const int> recorded, int threads) {
  if (shots < 1) throw std::invalid_argument("sample needs at least one shot");
  require_bound(circuit);
  noise.validate();

  ShotResult result;
  result.shots = shots;
  if (recorded.empty()) {
    for (int b = 0; b < circuit.n_clbits(); ++b) result.recorded_clbits.push_back(b);
  } else {
    for (int b : recorded) {
      if (b < 0 || b >= circuit.n_clbits()) throw std::out_of_range("recorded clbit out of range");
      result.recorded_clbits.push_back(b);
    }
  }

  const std::uint64_t key = derive_seed(base_seed, noise.rng_seed);
  std::vector<std::string> keys(shots);
  std::vector<NoiseTally> tallies(shots);
  parallel_for(static_cast<std::size_t>(shots), threads, [&](std::size_t t) {
    RandomStream rng(key, t);
    LazyRegister reg(circuit.n_qubits());
    std::vector<std::uint8_t> clbits(circuit.n_clbits(), 0);
    execute(circuit, noise, rng, reg, clbits, tallies[t]);
    std::string& k = keys[t];
    k.reserve(result.recorded_clbits.size());
    for (int b : result.recorded_clbits) k.push_back(clbits[b] ? '1' : '0');
  });

  for (int t = 0; t < shots; ++t) {
    ++result.counts[keys[t]];
    result.noise_events += tallies[t].events;
    if (tallies[t].events > 0) ++result.trajectories_with_noise_event;
    if (tallies[t].paulis > 0) ++result.trajectories_with_pauli;
  }
  return result;
}

std::string ShotResult::to_json() const {
  std::ostringstream out;
  out << "{\"shots\": " << shots << ", \"clbits\": [";
  for (std::size_t i = 0; i < recorded_clbits.size(); ++i)
    out << (i ? ", " : "") << recorded_clbits[i];
  out << "], \"counts\": {";
  bool first = true;
  for (const auto& [bits, n] : counts) {
    out << (first ? "" : ", ") << '"' << bits << "\": " << n;
    first = false;
  }
  out << "}}";
  return out.str();
}

double expectation_z(const ShotResult& result, int clbit) {
  std::size_t pos = 0;
  while (pos < result.recorded_clbits.size() && result.recorded_clbits[pos] != clbit) ++pos;
  if (pos == result.recorded_clbits.size())
    throw std::out_of_range("clbit " + std::to_string(clbit) + " was not recorded");
  long n0 = 0, n1 = 0;
  for (const auto& [bits, n] : result.counts) (bits[pos] == '0' ? n0 : n1) += n;
  return static_cast<double>(n0 - n1) / result.shots;
}

namespace {

LazyRegister run_unitary(const Circuit& circuit) {
  require_bound(circuit);
  if (circuit.has_non_unitary())
    throw std::invalid_argument("exact statevector evaluation needs a purely unitary circuit");
  LazyRegister reg(circuit.n_qubits());
  const std::vector<std::uint8_t> no_bits(circuit.n_clbits(), 0);
  for (const Gate& g : circuit.gates()) apply_unitary(g, reg, no_bits);
  return reg;
}

}  // namespace

std::vector<double> exact_expectations_z(const Circuit& circuit, std::span<const int> qubits) {
  const LazyRegister reg = run_unitary(circuit);
  std::vector<double> out;
  out.reserve(qubits.size());
  for (int q : qubits) {
    if (q < 0 || q >= circuit.n_qubits()) throw std::out_of_range("qubit out of range");
    out.push_back(reg.expectation_z(q));
  }
  return out;
}

StateVector simulate_statevector(const Circuit& circuit) { return run_unitary(circuit).to_dense(); }

std::vector<Branch> enumerate_branches(const Circuit& circuit, std::span<const int> kept_clbits) {
  require_bound(circuit);
  const auto& gates = circuit.gates();
  // A bit stays live while a later gate is conditioned on it.
  std::vector<int> last_read(circuit.n_clbits(), -1);
  for (std::size_t i = 0; i < gates.size(); ++i)
    if (gates[i].condition) last_read[gates[i].condition->clbit] = static_cast<int>(i);
  std::vector<bool> kept(circuit.n_clbits(), false);
  for (int b : kept_clbits) {
    if (b < 0 || b >= circuit.n_clbits()) throw std::out_of_range("kept clbit out of range");
    kept[b] = true;
  }

  std::vector<Branch> branches;
  branches.push_back(Branch{1.0, LazyRegister(circuit.n_qubits()),
                            std::vector<std::uint8_t>(circuit.n_clbits(), 0)});

  auto merge = [&](int gate_index) {
    for (Branch& b : branches)
      for (int bit = 0; bit < circuit.n_clbits(); ++bit)
        if (!kept[bit] && last_read[bit] <= gate_index) b.clbits[bit] = 0;
    std::vector<Branch> merged;
    for (Branch& b : branches) {
      bool absorbed = false;
      for (Branch& m : merged) {
        if (m.clbits == b.clbits && m.state.same_layout(b.state) &&
            std::norm(m.state.overlap(b.state)) > 1.0 - 1e-10) {
          m.weight += b.weight;
          absorbed = true;
          break;
        }
      }
      if (!absorbed) merged.push_back(std::move(b));
    }
    branches = std::move(merged);
  };

  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (g.kind != GateKind::Measure && g.kind != GateKind::Reset) {
      for (Branch& b : branches) apply_unitary(g, b.state, b.clbits);
      continue;
    }
    const int q = g.qubits[0];
    std::vector<Branch> next;
    for (Branch& b : branches) {
      const double p1 = b.state.probability_one(q);
      for (int outcome : {0, 1}) {
        const double p = outcome ? p1 : 1.0 - p1;
        if (p < kBranchCutoff) continue;
        Branch child = b;
        child.weight *= p;
        if (g.kind == GateKind::Measure) {
          child.state.collapse(q, outcome);
          child.clbits[*g.clbit] = static_cast<std::uint8_t>(outcome);
        } else {
          child.state.reset_to_zero(q, outcome);
        }
        next.push_back(std::move(child));
      }
    }
    branches = std::move(next);
    merge(static_cast<int>(i));
  }
  return branches;
}

std::vector<double> exact_clbit_expectations(const Circuit& circuit, std::span<const int> clbits) {
  const auto branches = enumerate_branches(circuit, clbits);
  std::vector<double> out;
  for (int bit : clbits) {
    double e = 0.0;
    for (const Branch& b : branches) e += b.weight * (b.clbits[bit] ? -1.0 : 1.0);
    out.push_back(e);
  }
  return out;
}

}  // namespace dqclab
