#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dqclab/ansatz.hpp"
#include "dqclab/circuit.hpp"
#include "dqclab/dqc.hpp"
#include "dqclab/spsa.hpp"

namespace dqclab {

enum class ExecutionMode { MonolithicIdeal, MonolithicNoisy, DistributedNoisy, DistributedIdeal };

std::string_view to_string(ExecutionMode mode);

struct ForwardOptions {
  int shots = 1000;
  double noise_p = 0.03;
  // Ideal modes return exact expectations instead of shot estimates.
  bool exact = true;
  // Worker threads used across batch rows.
  int threads = 1;
};

// Rows are samples; y is one-hot with K = 2 columns.
struct LabeledBatch {
  Eigen::MatrixXd X;
  Eigen::MatrixXd y;

  Eigen::Index rows() const { return X.rows(); }
  void validate() const;
};

// A variational classifier f(x, theta) = (<Z_q0>, <Z_q1>) for one architecture,
// holding both the monolithic circuit and its distributed rewrite.
class Classifier {
 public:
  explicit Classifier(Architecture arch, Topology topology = {});

  const Architecture& architecture() const { return arch_; }
  const Topology& topology() const { return topology_; }
  const Circuit& monolithic() const { return monolithic_; }
  const Circuit& distributed() const { return distributed_; }
  int parameter_count() const { return monolithic_.n_theta_params(); }
  int feature_count() const { return monolithic_.n_data_params(); }

  Eigen::VectorXd forward(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                          ExecutionMode mode, const ForwardOptions& options,
                          std::uint64_t seed) const;

  // Row i uses seed derive_seed(seed, i).
  Eigen::MatrixXd forward_batch(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                                ExecutionMode mode, const ForwardOptions& options,
                                std::uint64_t seed) const;

 private:
  Architecture arch_;
  Topology topology_;
  Circuit monolithic_;
  Circuit monolithic_unitary_;
  Circuit distributed_;
  std::vector<int> readout_bits_;
};

Eigen::VectorXd forward(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                        const Architecture& arch, ExecutionMode mode, int shots,
                        std::uint64_t seed);

// Max-subtracted softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& z);
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& z);

// -(1/N) sum_i sum_k y_ik log max(p_ik, 1e-12).
double cross_entropy(const Eigen::MatrixXd& y, const Eigen::MatrixXd& p);

double cost(const Classifier& model, const Eigen::VectorXd& theta, const LabeledBatch& batch,
            ExecutionMode mode, const ForwardOptions& options, std::uint64_t seed);

// argmax with ties resolved to the lowest class index.
int predict_class(const Eigen::Ref<const Eigen::RowVectorXd>& scores);
double accuracy(const Eigen::MatrixXd& scores, const Eigen::MatrixXd& y);

double evaluate_accuracy(const Classifier& model, const Eigen::VectorXd& theta,
                         const LabeledBatch& split, ExecutionMode mode,
                         const ForwardOptions& options, std::uint64_t seed);

struct TrainConfig {
  int iterations = 1000;
  int batch_size = 64;
  int shots = 1000;
  SpsaConfig spsa;
  int eval_every = 10;
  // Training and validation use exact expectations; false samples `shots`.
  bool exact = true;
  // theta0 is drawn uniformly from [-init_range, init_range].
  double init_range = 0.1;

  void validate() const;
};

struct HistoryRow {
  int iteration = 0;
  double loss = 0.0;
  std::optional<double> val_accuracy;
};

struct TrainResult {
  Eigen::VectorXd theta0;
  Eigen::VectorXd theta;
  std::vector<HistoryRow> history;
  // Set when SPSA hit a non-finite cost; history holds the completed iterations.
  std::optional<std::string> failure;
};

Eigen::VectorXd initial_theta(int n, double range, std::uint64_t seed);

// Monolithic, noiseless SPSA training on minibatches drawn without replacement.
// Validation accuracy is recorded when (iteration + 1) % eval_every == 0 and on
// the last iteration.
TrainResult train_classifier(const Classifier& model, const LabeledBatch& train,
                             const LabeledBatch& validation, const TrainConfig& config,
                             std::uint64_t seed, int threads = 1);

// `iteration,loss,val_accuracy` with an empty cell off-cadence.
std::string history_csv(const std::vector<HistoryRow>& history);

}  // namespace dqclab
