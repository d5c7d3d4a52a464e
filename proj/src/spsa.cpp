#include "dqclab/spsa.hpp"

#include <cmath>
#include <string>

namespace dqclab {

double SpsaConfig::step_gain(int k) const { return a / std::pow(k + 1 + stability(), alpha); }

double SpsaConfig::perturbation_gain(int k) const { return c / std::pow(k + 1, gamma); }

void SpsaConfig::validate() const {
  if (iterations < 0) throw std::invalid_argument("SPSA: negative iteration count");
  if (!(a > 0.0) || !(c > 0.0) || !(alpha > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("SPSA: gain coefficients must be positive");
}

SpsaResult spsa_minimize(const SpsaObjective& cost, Eigen::VectorXd theta0,
                         const SpsaConfig& config, RandomStream& rng,
                         const SpsaObserver& observer) {
  config.validate();
  SpsaResult result;
  result.theta = std::move(theta0);
  const Eigen::Index dim = result.theta.size();
  Eigen::VectorXd delta(dim);

  for (int k = 0; k < config.iterations; ++k) {
    for (Eigen::Index i = 0; i < dim; ++i) delta(i) = rng.rademacher();
    const double ck = config.perturbation_gain(k);
    const double plus = cost(result.theta + ck * delta, k);
    const double minus = cost(result.theta - ck * delta, k);
    if (!std::isfinite(plus) || !std::isfinite(minus))
      throw NonFiniteCostError("SPSA: non-finite cost at iteration " + std::to_string(k) +
                                   " (plus=" + std::to_string(plus) +
                                   ", minus=" + std::to_string(minus) + ")",
                               result);
    // delta_i^-1 == delta_i for Rademacher perturbations.
    result.theta -= config.step_gain(k) * ((plus - minus) / (2.0 * ck)) * delta;
    const double loss = 0.5 * (plus + minus);
    result.history.push_back({k, loss});
    if (observer) observer(k, result.theta, loss);
  }
  return result;
}

}  // namespace dqclab
