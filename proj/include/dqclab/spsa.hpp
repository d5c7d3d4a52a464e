#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dqclab/random.hpp"

namespace dqclab {

// Gain schedules a_k = a / (k + 1 + A)^alpha and c_k = c / (k + 1)^gamma.
struct SpsaConfig {
  int iterations = 1000;
  double a = 0.2;
  double c = 0.1;
  // Negative selects the usual stability constant 0.01 * iterations.
  double A = -1.0;
  double alpha = 0.602;
  double gamma = 0.101;

  double stability() const { return A < 0.0 ? 0.01 * iterations : A; }
  double step_gain(int k) const;
  double perturbation_gain(int k) const;
  void validate() const;
};

struct SpsaStep {
  int iteration = 0;
  // Mean of the two perturbed evaluations.
  double loss = 0.0;
};

struct SpsaResult {
  Eigen::VectorXd theta;
  std::vector<SpsaStep> history;
};

class NonFiniteCostError : public std::runtime_error {
 public:
  NonFiniteCostError(const std::string& what, SpsaResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const SpsaResult& partial() const { return partial_; }

 private:
  SpsaResult partial_;
};

// Cost of theta at iteration k. Both evaluations of one iteration receive the
// same k, so a stochastic objective can share its minibatch between them.
using SpsaObjective = std::function<double(const Eigen::VectorXd& theta, int iteration)>;
using SpsaObserver = std::function<void(int iteration, const Eigen::VectorXd& theta, double loss)>;

// Per iteration: Rademacher direction delta, g = (C(theta + c_k delta) -
// C(theta - c_k delta)) / (2 c_k) * delta, theta <- theta - a_k g.
// Throws NonFiniteCostError carrying the history so far.
SpsaResult spsa_minimize(const SpsaObjective& cost, Eigen::VectorXd theta0,
                         const SpsaConfig& config, RandomStream& rng,
                         const SpsaObserver& observer = {});

}  // namespace dqclab
