#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dqclab/random.hpp"
#include "dqclab/simulator.hpp"
#include "oracle.hpp"

using namespace dqclab;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit single(int n, int nc, std::initializer_list<Gate> gates) {
  Circuit c(n, nc);
  for (const Gate& g : gates) c.append(g);
  return c;
}

ShotResult counts_of(std::map<std::string, int> counts) {
  ShotResult r;
  r.recorded_clbits = {0};
  for (const auto& [k, n] : counts) r.shots += n;
  r.counts = std::move(counts);
  return r;
}

}  // namespace

TEST(Simulator, HadamardOnZero) {
  RandomStream rng(1);
  const RunOutcome r = run_once(single(1, 0, {Gate::h(0)}), {}, rng);
  EXPECT_NEAR(r.state.amps(0).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.state.amps(1).real(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Simulator, BellPair) {
  RandomStream rng(1);
  const RunOutcome r = run_once(single(2, 0, {Gate::h(0), Gate::cx(0, 1)}), {}, rng);
  EXPECT_NEAR(std::abs(r.state.amps(0b00)), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(r.state.amps(0b11)), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(r.state.amps(0b01)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r.state.amps(0b10)), 0.0, 1e-15);
}

TEST(Simulator, MeasureThenReset) {
  RandomStream rng(1);
  const RunOutcome r = run_once(single(1, 1, {Gate::x(0), Gate::measure(0, 0), Gate::reset(0)}), {}, rng);
  EXPECT_EQ(r.clbits[0], 1);
  EXPECT_NEAR(std::abs(r.state.amps(0)), 1.0, 1e-15);
}

TEST(Simulator, ConditionalGatesFollowClassicalBits) {
  RandomStream rng(3);
  const Circuit c = single(2, 1, {Gate::x(0), Gate::measure(0, 0), Gate::x(1, Condition{0, 1})});
  const RunOutcome r = run_once(c, {}, rng);
  EXPECT_NEAR(std::abs(r.state.amps(0b11)), 1.0, 1e-15);
  const Circuit skip = single(2, 1, {Gate::measure(0, 0), Gate::x(1, Condition{0, 1})});
  EXPECT_NEAR(std::abs(run_once(skip, {}, rng).state.amps(0)), 1.0, 1e-15);
}

TEST(Simulator, DeterministicCounts) {
  const ShotResult r = sample(single(1, 1, {Gate::x(0), Gate::measure(0, 0)}), 1000, {}, 7);
  ASSERT_EQ(r.counts.size(), 1u);
  EXPECT_EQ(r.counts.at("1"), 1000);
  EXPECT_EQ(r.to_json(), "{\"shots\": 1000, \"clbits\": [0], \"counts\": {\"1\": 1000}}");
}

TEST(Simulator, HadamardCountsAreBinomial) {
  // 500 +- 50 is about 3.2 standard deviations, so >= 99 of 100 seeds pass.
  const Circuit c = single(1, 1, {Gate::h(0), Gate::measure(0, 0)});
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ShotResult r = sample(c, 1000, {}, seed);
    const int zeros = r.counts.contains("0") ? r.counts.at("0") : 0;
    if (std::abs(zeros - 500) <= 50) ++inside;
  }
  EXPECT_GE(inside, 99);
}

TEST(Simulator, NoiseEventRate) {
  NoiseConfig noise{.enabled = true, .p = 0.03, .rng_seed = 11};
  const ShotResult r = sample(single(1, 1, {Gate::x(0), Gate::measure(0, 0)}), 10000, noise, 5);
  // One gate: events ~ Binomial(1e4, 0.03), non-identity Paulis ~ Binomial(1e4, 0.0225).
  EXPECT_NEAR(r.trajectories_with_noise_event / 1e4, 0.03, 0.006);
  EXPECT_NEAR(r.trajectories_with_pauli / 1e4, 0.0225, 0.006);
  // X and Y flip the outcome: P(0) = p / 2.
  EXPECT_NEAR(r.counts.at("0") / 1e4, 0.015, 0.005);
}

TEST(Simulator, NoiseDisabledOrZeroIsIdeal) {
  const Circuit c = single(1, 1, {Gate::x(0), Gate::measure(0, 0)});
  const ShotResult off = sample(c, 2000, {.enabled = false, .p = 1.0}, 1);
  const ShotResult zero = sample(c, 2000, {.enabled = true, .p = 0.0}, 1);
  EXPECT_EQ(off.counts.at("1"), 2000);
  EXPECT_EQ(zero.counts.at("1"), 2000);
  EXPECT_EQ(zero.noise_events, 0);
}

TEST(Simulator, NoiseConfigValidation) {
  EXPECT_THROW((NoiseConfig{.enabled = true, .p = 1.5}.validate()), std::invalid_argument);
  EXPECT_THROW((NoiseConfig{.enabled = true, .p = -0.1}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((NoiseConfig{.enabled = true, .p = 0.03}.validate()));
}

TEST(Simulator, DepolarizingChannelOnOneQubit) {
  // Average of |psi><psi| over trajectories against (1 - p) rho + p I / 2.
  const double p = 0.03;
  const Circuit c = single(1, 0, {Gate::ry(0, 0.9)});
  const NoiseConfig noise{.enabled = true, .p = p, .rng_seed = 2};
  const int n = 20000;
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (int t = 0; t < n; ++t) {
    RandomStream rng(derive_seed(99, t));
    const auto amps = run_once(c, noise, rng).state.amps;
    rho += amps * amps.adjoint();
  }
  rho /= n;
  Eigen::Vector2cd psi(std::cos(0.45), std::sin(0.45));
  const Eigen::Matrix2cd ideal = psi * psi.adjoint();
  const Eigen::Matrix2cd expected = (1 - p) * ideal + p * Eigen::Matrix2cd::Identity() / 2;
  // Per-element spread is bounded by the (at most 1) spread of a single outer product.
  const double tol = 5.0 / std::sqrt(static_cast<double>(n));
  EXPECT_LT((rho - expected).cwiseAbs().maxCoeff(), tol);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
}

TEST(Simulator, SamplingIndependentOfThreadCount) {
  Circuit c(3, 3);
  c.append(Gate::h(0));
  c.append(Gate::ry(1, 1.1));
  c.append(Gate::cx(0, 2));
  c.append(Gate::cx(1, 2));
  for (int q = 0; q < 3; ++q) c.append(Gate::measure(q, q));
  const NoiseConfig noise{.enabled = true, .p = 0.05, .rng_seed = 4};
  const ShotResult a = sample(c, 3000, noise, 17, {}, 1);
  const ShotResult b = sample(c, 3000, noise, 17, {}, 4);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.noise_events, b.noise_events);
  const ShotResult other = sample(c, 3000, noise, 18, {}, 1);
  EXPECT_NE(a.counts, other.counts);
}

TEST(Simulator, RecordedBitOrder) {
  const Circuit c = single(2, 2, {Gate::x(1), Gate::measure(0, 0), Gate::measure(1, 1)});
  const std::vector<int> order{1, 0};
  const ShotResult r = sample(c, 10, {}, 1, order);
  EXPECT_EQ(r.counts.at("10"), 10);
  EXPECT_EQ(expectation_z(r, 1), -1.0);
  EXPECT_EQ(expectation_z(r, 0), 1.0);
}

TEST(Simulator, ExpectationFromCounts) {
  EXPECT_DOUBLE_EQ(expectation_z(counts_of({{"0", 1000}}), 0), 1.0);
  EXPECT_DOUBLE_EQ(expectation_z(counts_of({{"1", 1000}}), 0), -1.0);
  EXPECT_DOUBLE_EQ(expectation_z(counts_of({{"0", 600}, {"1", 400}}), 0), 0.2);
  EXPECT_THROW(expectation_z(counts_of({{"0", 1}}), 3), std::out_of_range);
}

TEST(Simulator, ExactExpectations) {
  const std::vector<int> q0{0};
  EXPECT_DOUBLE_EQ(exact_expectations_z(Circuit(1, 0), q0)[0], 1.0);
  EXPECT_NEAR(exact_expectations_z(single(1, 0, {Gate::ry(0, kPi)}), q0)[0], -1.0, 1e-12);
  EXPECT_NEAR(exact_expectations_z(single(1, 0, {Gate::ry(0, kPi / 2)}), q0)[0], 0.0, 1e-12);
  EXPECT_THROW(exact_expectations_z(single(1, 1, {Gate::measure(0, 0)}), q0), std::invalid_argument);
}

TEST(Simulator, StatevectorMatchesBruteForce) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> qubit(0, 4), kind(0, 3);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    Circuit c(5, 0);
    for (int g = 0; g < 40; ++g) {
      const int q = qubit(rng);
      switch (kind(rng)) {
        case 0: c.append(Gate::h(q)); break;
        case 1: c.append(Gate::ry(q, angle(rng))); break;
        case 2: c.append(Gate::z(q)); break;
        default: c.append(Gate::cx(q, (q + 1 + qubit(rng) % 4) % 5)); break;
      }
    }
    Eigen::VectorXcd expected = oracle::zero_state(5);
    std::vector<int> bits;
    oracle::run(c, expected, bits);
    const StateVector got = simulate_statevector(c);
    EXPECT_LT((got.amps - expected).norm(), 1e-12);
    const std::vector<int> all{0, 1, 2, 3, 4};
    const auto ez = exact_expectations_z(c, all);
    for (int q = 0; q < 5; ++q) EXPECT_NEAR(ez[q], oracle::expect_z(expected, q), 1e-12);
  }
}

TEST(Simulator, BranchEnumeration) {
  // Teleport-like circuit: branches carry all the weight, and the marginal of
  // the measured bit matches the exact value.
  Circuit c(2, 2);
  c.append(Gate::ry(0, 0.8));
  c.append(Gate::cx(0, 1));
  c.append(Gate::measure(0, 0));
  c.append(Gate::x(1, Condition{0, 1}));
  c.append(Gate::measure(1, 1));
  const std::vector<int> kept{0, 1};
  const auto branches = enumerate_branches(c, kept);
  double total = 0.0;
  for (const Branch& b : branches) total += b.weight;
  EXPECT_NEAR(total, 1.0, 1e-12);
  const auto e = exact_clbit_expectations(c, kept);
  EXPECT_NEAR(e[0], std::cos(0.8), 1e-12);
  EXPECT_NEAR(e[1], 1.0, 1e-12);
}

TEST(Simulator, SymbolicCircuitIsRejected) {
  Circuit c(1, 0, 1, 0);
  c.append(Gate::ry(0, ParameterRef{ParamSpace::Data, 0}));
  RandomStream rng(1);
  EXPECT_THROW(run_once(c, {}, rng), std::invalid_argument);
}
