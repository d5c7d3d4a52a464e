#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "dqclab/random.hpp"
#include "dqclab/spsa.hpp"

using namespace dqclab;

namespace {

double sphere(const Eigen::VectorXd& theta, int) { return theta.squaredNorm(); }

}  // namespace

TEST(Spsa, GainSchedules) {
  SpsaConfig cfg;
  cfg.iterations = 1000;
  EXPECT_DOUBLE_EQ(cfg.perturbation_gain(0), 0.1);
  EXPECT_NEAR(cfg.perturbation_gain(99), 0.1 / std::pow(100.0, 0.101), 1e-15);
  EXPECT_NEAR(cfg.perturbation_gain(99), 0.0628, 1e-4);
  EXPECT_DOUBLE_EQ(cfg.stability(), 10.0);
  EXPECT_NEAR(cfg.step_gain(0), 0.2 / std::pow(11.0, 0.602), 1e-15);
  cfg.A = 3.0;
  EXPECT_DOUBLE_EQ(cfg.stability(), 3.0);
}

TEST(Spsa, QuadraticConverges) {
  int converged = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SpsaConfig cfg;
    cfg.iterations = 200;
    RandomStream rng(seed);
    const SpsaResult r = spsa_minimize(sphere, Eigen::VectorXd::Ones(4), cfg, rng);
    EXPECT_EQ(r.history.size(), 200u);
    if (r.theta.norm() < 0.1) ++converged;
  }
  EXPECT_GE(converged, 9);
}

TEST(Spsa, ConstantCostLeavesThetaUnchanged) {
  SpsaConfig cfg;
  cfg.iterations = 50;
  RandomStream rng(3);
  const Eigen::VectorXd theta0 = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
  const SpsaResult r = spsa_minimize([](const Eigen::VectorXd&, int) { return 2.5; }, theta0, cfg, rng);
  EXPECT_EQ(r.theta, theta0);
  for (const SpsaStep& s : r.history) EXPECT_EQ(s.loss, 2.5);
}

TEST(Spsa, ZeroIterations) {
  SpsaConfig cfg;
  cfg.iterations = 0;
  RandomStream rng(1);
  const SpsaResult r = spsa_minimize(sphere, Eigen::VectorXd::Ones(3), cfg, rng);
  EXPECT_TRUE(r.history.empty());
  EXPECT_EQ(r.theta, Eigen::VectorXd::Ones(3));
}

TEST(Spsa, GradientEstimateAlignsWithTrueGradient) {
  // Averaged over many directions, one SPSA step is -a_0 times an unbiased
  // gradient estimate.
  const Eigen::VectorXd b = (Eigen::VectorXd(6) << 0.5, -1.0, 2.0, 0.0, 1.5, -0.3).finished();
  auto cost = [&](const Eigen::VectorXd& t, int) { return (t - b).squaredNorm() + std::pow(t(0), 4); };
  const Eigen::VectorXd theta0 = Eigen::VectorXd::Constant(6, 0.7);
  Eigen::VectorXd truth = 2.0 * (theta0 - b);
  truth(0) += 4.0 * std::pow(theta0(0), 3);
  SpsaConfig cfg;
  cfg.iterations = 1;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(6);
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    RandomStream rng(derive_seed(55, t));
    const SpsaResult r = spsa_minimize(cost, theta0, cfg, rng);
    mean += (theta0 - r.theta) / cfg.step_gain(0);
  }
  mean /= trials;
  const double cosine = mean.dot(truth) / (mean.norm() * truth.norm());
  EXPECT_GT(cosine, 0.9);
}

TEST(Spsa, ObserverSeesEveryIteration) {
  SpsaConfig cfg;
  cfg.iterations = 7;
  RandomStream rng(1);
  std::vector<int> seen;
  spsa_minimize(sphere, Eigen::VectorXd::Ones(2), cfg, rng,
                [&](int k, const Eigen::VectorXd&, double) { seen.push_back(k); });
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
}

TEST(Spsa, NonFiniteCostKeepsPartialHistory) {
  SpsaConfig cfg;
  cfg.iterations = 10;
  RandomStream rng(1);
  auto cost = [](const Eigen::VectorXd& t, int k) {
    return k == 3 ? std::numeric_limits<double>::quiet_NaN() : t.squaredNorm();
  };
  try {
    spsa_minimize(cost, Eigen::VectorXd::Ones(2), cfg, rng);
    FAIL() << "expected NonFiniteCostError";
  } catch (const NonFiniteCostError& e) {
    EXPECT_EQ(e.partial().history.size(), 3u);
    EXPECT_TRUE(e.partial().theta.allFinite());
  }
}

TEST(Spsa, Validation) {
  SpsaConfig cfg;
  cfg.a = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = SpsaConfig{};
  cfg.iterations = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
  RandomStream a(7, 1), b(7, 1), c(7, 2);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
}

TEST(Random, DistributionMoments) {
  RandomStream rng(11);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sr = 0;
  std::vector<int> hist(5, 0);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sr += rng.rademacher();
    ++hist[rng.below(5)];
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
  EXPECT_NEAR(sr / n, 0.0, 0.01);
  for (int h : hist) EXPECT_NEAR(h / static_cast<double>(n), 0.2, 0.005);
}
