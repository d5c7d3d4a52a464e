#include "dqclab/qml.hpp"

#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>

#include "dqclab/parallel.hpp"
#include "dqclab/random.hpp"
#include "dqclab/simulator.hpp"

namespace dqclab {

std::string_view to_string(ExecutionMode mode) {
  switch (mode) {
    case ExecutionMode::MonolithicIdeal: return "monolithic_ideal";
    case ExecutionMode::MonolithicNoisy: return "monolithic_noisy";
    case ExecutionMode::DistributedNoisy: return "distributed_noisy";
    case ExecutionMode::DistributedIdeal: return "distributed_ideal";
  }
  return "?";
}

void LabeledBatch::validate() const {
  if (X.rows() != y.rows()) throw std::invalid_argument("batch: X and y row counts differ");
  if (y.cols() != 2) throw std::invalid_argument("batch: labels must be one-hot with K = 2");
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    if (std::abs(y.row(i).sum() - 1.0) > 1e-12) throw std::invalid_argument("batch: label row is not one-hot");
}

Classifier::Classifier(Architecture arch, Topology topology)
    : arch_(std::move(arch)),
      topology_(topology),
      monolithic_(build(arch_)),
      monolithic_unitary_(strip_terminal_measurements(monolithic_)),
      distributed_(transform(monolithic_, topology_)) {
  for (int k = 0; k < static_cast<int>(arch_.measured_qubits.size()); ++k) readout_bits_.push_back(k);
}

Eigen::VectorXd Classifier::forward(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                                    ExecutionMode mode, const ForwardOptions& options,
                                    std::uint64_t seed) const {
  if (x.size() != feature_count())
    throw std::invalid_argument("forward: expected " + std::to_string(feature_count()) +
                                " features, got " + std::to_string(x.size()));
  if (theta.size() != parameter_count())
    throw std::invalid_argument("forward: expected " + std::to_string(parameter_count()) +
                                " parameters, got " + std::to_string(theta.size()));
  const std::span<const double> xs(x.data(), x.size());
  const std::span<const double> ts(theta.data(), theta.size());

  std::vector<double> e;
  const bool ideal = mode == ExecutionMode::MonolithicIdeal || mode == ExecutionMode::DistributedIdeal;
  const bool distributed = mode == ExecutionMode::DistributedIdeal || mode == ExecutionMode::DistributedNoisy;
  if (ideal && options.exact) {
    if (distributed)
      e = exact_clbit_expectations(bind(distributed_, xs, ts), readout_bits_);
    else
      e = exact_expectations_z(bind(monolithic_unitary_, xs, ts), arch_.measured_qubits);
  } else {
    NoiseConfig noise;
    noise.enabled = !ideal;
    noise.p = ideal ? 0.0 : options.noise_p;
    const ShotResult shots =
        sample(bind(distributed ? distributed_ : monolithic_, xs, ts), options.shots, noise, seed,
               readout_bits_);
    for (int b : readout_bits_) e.push_back(expectation_z(shots, b));
  }
  return Eigen::Map<const Eigen::VectorXd>(e.data(), static_cast<Eigen::Index>(e.size()));
}

Eigen::MatrixXd Classifier::forward_batch(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                                          ExecutionMode mode, const ForwardOptions& options,
                                          std::uint64_t seed) const {
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(readout_bits_.size()));
  parallel_for(static_cast<std::size_t>(X.rows()), options.threads, [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    out.row(row) = forward(theta, X.row(row).transpose(), mode, options, derive_seed(seed, i)).transpose();
  });
  return out;
}

Eigen::VectorXd forward(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                        const Architecture& arch, ExecutionMode mode, int shots,
                        std::uint64_t seed) {
  ForwardOptions options;
  options.shots = shots;
  return Classifier(arch).forward(theta, x, mode, options, seed);
}

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
  const Eigen::ArrayXd e = (z.array() - z.maxCoeff()).exp();
  return (e / e.sum()).matrix();
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd p(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) p.row(i) = softmax(z.row(i).transpose()).transpose();
  return p;
}

double cross_entropy(const Eigen::MatrixXd& y, const Eigen::MatrixXd& p) {
  if (y.rows() != p.rows() || y.cols() != p.cols())
    throw std::invalid_argument("cross_entropy: shape mismatch");
  if (y.rows() == 0) throw std::invalid_argument("cross_entropy: empty batch");
  const Eigen::ArrayXXd logp = p.array().max(1e-12).log();
  return -(y.array() * logp).sum() / static_cast<double>(y.rows());
}

double cost(const Classifier& model, const Eigen::VectorXd& theta, const LabeledBatch& batch,
            ExecutionMode mode, const ForwardOptions& options, std::uint64_t seed) {
  batch.validate();
  return cross_entropy(batch.y, softmax_rows(model.forward_batch(theta, batch.X, mode, options, seed)));
}

int predict_class(const Eigen::Ref<const Eigen::RowVectorXd>& scores) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < scores.size(); ++k)
    if (scores(k) > scores(best)) best = k;
  return static_cast<int>(best);
}

double accuracy(const Eigen::MatrixXd& scores, const Eigen::MatrixXd& y) {
  if (scores.rows() != y.rows()) throw std::invalid_argument("accuracy: row count mismatch");
  if (scores.rows() == 0) throw std::invalid_argument("accuracy: empty split");
  int correct = 0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i)
    if (predict_class(scores.row(i)) == predict_class(y.row(i))) ++correct;
  return static_cast<double>(correct) / static_cast<double>(scores.rows());
}

double evaluate_accuracy(const Classifier& model, const Eigen::VectorXd& theta,
                         const LabeledBatch& split, ExecutionMode mode,
                         const ForwardOptions& options, std::uint64_t seed) {
  if (split.rows() == 0) throw std::invalid_argument("evaluate_accuracy: empty split");
  split.validate();
  return accuracy(model.forward_batch(theta, split.X, mode, options, seed), split.y);
}

void TrainConfig::validate() const {
  spsa.validate();
  if (iterations < 0) throw std::invalid_argument("train: negative iteration count");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be positive");
  if (shots < 1) throw std::invalid_argument("train: shots must be positive");
  if (eval_every < 1) throw std::invalid_argument("train: eval_every must be positive");
  if (!(init_range >= 0.0)) throw std::invalid_argument("train: init_range must be non-negative");
}

Eigen::VectorXd initial_theta(int n, double range, std::uint64_t seed) {
  RandomStream rng(seed, 0x7e7a);
  Eigen::VectorXd theta(n);
  for (int i = 0; i < n; ++i) theta(i) = range * (2.0 * rng.uniform() - 1.0);
  return theta;
}

TrainResult train_classifier(const Classifier& model, const LabeledBatch& train,
                             const LabeledBatch& validation, const TrainConfig& config,
                             std::uint64_t seed, int threads) {
  config.validate();
  train.validate();
  if (config.batch_size > train.rows())
    throw std::invalid_argument("train: batch_size exceeds training-set size");

  SpsaConfig spsa = config.spsa;
  spsa.iterations = config.iterations;

  ForwardOptions options;
  options.shots = config.shots;
  options.exact = config.exact;
  options.threads = threads;

  TrainResult result;
  result.theta0 = initial_theta(model.parameter_count(), config.init_range, derive_seed(seed, 3));

  RandomStream batch_rng(derive_seed(seed, 2));
  std::vector<Eigen::Index> pool(train.rows());
  for (Eigen::Index i = 0; i < train.rows(); ++i) pool[i] = i;
  int batch_iteration = -1;
  LabeledBatch batch;
  batch.X.resize(config.batch_size, train.X.cols());
  batch.y.resize(config.batch_size, train.y.cols());

  auto objective = [&](const Eigen::VectorXd& theta, int k) {
    if (k != batch_iteration) {
      // Partial Fisher-Yates: the first batch_size entries form a uniform sample
      // without replacement.
      for (int i = 0; i < config.batch_size; ++i) {
        const auto j = i + static_cast<Eigen::Index>(batch_rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
        batch.X.row(i) = train.X.row(pool[i]);
        batch.y.row(i) = train.y.row(pool[i]);
      }
      batch_iteration = k;
    }
    return cost(model, theta, batch, ExecutionMode::MonolithicIdeal, options,
                derive_seed(seed, static_cast<std::uint64_t>(k), 4));
  };

  auto observer = [&](int k, const Eigen::VectorXd& theta, double loss) {
    HistoryRow row{k, loss, std::nullopt};
    if ((k + 1) % config.eval_every == 0 || k + 1 == config.iterations)
      row.val_accuracy = evaluate_accuracy(model, theta, validation, ExecutionMode::MonolithicIdeal,
                                           options, derive_seed(seed, static_cast<std::uint64_t>(k), 5));
    result.history.push_back(row);
  };

  RandomStream spsa_rng(derive_seed(seed, 1));
  try {
    result.theta = spsa_minimize(objective, result.theta0, spsa, spsa_rng, observer).theta;
  } catch (const NonFiniteCostError& e) {
    result.theta = e.partial().theta;
    result.failure = e.what();
  }
  return result;
}

std::string history_csv(const std::vector<HistoryRow>& history) {
  std::string out = "iteration,loss,val_accuracy\n";
  char buf[96];
  for (const HistoryRow& row : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.10f,", row.iteration, row.loss);
    out += buf;
    if (row.val_accuracy) {
      std::snprintf(buf, sizeof(buf), "%.6f", *row.val_accuracy);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace dqclab
