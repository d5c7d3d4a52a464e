#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dqclab/circuit.hpp"
#include "dqclab/lazy_register.hpp"
#include "dqclab/random.hpp"
#include "dqclab/statevector.hpp"

namespace dqclab {

// Gate-attached depolarizing noise. After each executed unitary gate a
// depolarizing event fires with probability p and applies a Pauli drawn
// uniformly from {I,X,Y,Z} (one-qubit gates) or {I,X,Y,Z}^2 (CX), which realizes
// rho -> (1 - p) rho + p I/d. Measurement and reset are noiseless.
struct NoiseConfig {
  bool enabled = false;
  double p = 0.0;
  std::uint64_t rng_seed = 0;
  bool single_qubit_gates = true;
  bool two_qubit_gates = true;

  void validate() const;
};

struct NoiseTally {
  int events = 0;   // depolarizing events that fired
  int paulis = 0;   // events that drew a non-identity Pauli
};

struct RunOutcome {
  StateVector state;
  std::vector<std::uint8_t> clbits;
  NoiseTally noise;
};

// Executes one trajectory from |0...0>. Consumes one uniform draw per MEASURE,
// one per RESET of a qubit in superposition, and one (plus one Pauli choice when
// it fires) per noisy gate, all in gate order.
RunOutcome run_once(const Circuit& circuit, const NoiseConfig& noise, RandomStream& rng);

struct ShotResult {
  int shots = 0;
  // Classical bits recorded in the count keys; character i of a key is the
  // value of recorded_clbits[i].
  std::vector<int> recorded_clbits;
  std::map<std::string, int> counts;
  int trajectories_with_noise_event = 0;
  int trajectories_with_pauli = 0;
  std::int64_t noise_events = 0;

  std::string to_json() const;
};

// Runs `shots` independent trajectories. Trajectory t draws from the stream
// keyed by (derive_seed(base_seed, noise.rng_seed), t), so the result does not
// depend on `threads`. An empty `recorded` list records every classical bit.
ShotResult sample(const Circuit& circuit, int shots, const NoiseConfig& noise,
                  std::uint64_t base_seed, std::span<const int> recorded = {}, int threads = 1);

// (N0 - N1) / shots for one classical bit.
double expectation_z(const ShotResult& result, int clbit);

// Exact <Z_i> for a purely unitary circuit.
std::vector<double> exact_expectations_z(const Circuit& circuit, std::span<const int> qubits);
StateVector simulate_statevector(const Circuit& circuit);

// One measurement history of a noiseless circuit with its probability weight.
struct Branch {
  double weight = 1.0;
  LazyRegister state;
  std::vector<std::uint8_t> clbits;
};

// Exact enumeration of measurement branches for a noiseless circuit. Branches
// whose states coincide (up to global phase) and agree on every classical bit
// that is still read later, or listed in `kept_clbits`, are merged.
std::vector<Branch> enumerate_branches(const Circuit& circuit, std::span<const int> kept_clbits);

// Exact E = P(bit=0) - P(bit=1) for each listed classical bit, marginalizing all
// other measurement outcomes.
std::vector<double> exact_clbit_expectations(const Circuit& circuit, std::span<const int> clbits);

}  // namespace dqclab
