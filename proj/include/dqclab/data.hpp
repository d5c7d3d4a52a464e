#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dqclab {

// Graded-difficulty generator settings. Class centroids sit at opposite vertices
// of a hypercube of half-width class_sep in the informative subspace.
struct DatasetPreset {
  int id = 1;
  int n_informative = 8;
  double class_sep = 2.0;
};

// Throws std::invalid_argument for ids outside {1, 2, 3}.
const DatasetPreset& dataset_preset(int id);

struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXi labels;  // 0 or 1
  int preset_id = 0;
  std::uint64_t seed = 0;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::MatrixXd one_hot(int classes = 2) const;
  Dataset subset(std::span<const Eigen::Index> rows) const;
};

// Balanced two-class data: informative features are centroid + N(0, 1), the
// remaining columns are half redundant linear combinations of the informative
// ones and half pure N(0, 1) noise. Rows are shuffled.
Dataset generate(int preset_id, std::uint64_t seed, int n_samples = 1000, int n_features = 8);

struct Splits {
  Dataset train;
  Dataset validation;
  Dataset test;
  std::vector<Eigen::Index> train_rows, validation_rows, test_rows;
};

// Shuffled 70/15/15 partition (700/150/150 for 1000 rows).
Splits split(const Dataset& data, std::uint64_t seed);

// Per-feature min-max map onto [low, high], fitted on one matrix and applied to
// others with clamping. Constant features map to the midpoint.
class FeatureScaler {
 public:
  static FeatureScaler fit(const Eigen::MatrixXd& train, double low = -std::numbers::pi,
                           double high = std::numbers::pi);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;

  const Eigen::RowVectorXd& column_min() const { return min_; }
  const Eigen::RowVectorXd& column_max() const { return max_; }

 private:
  Eigen::RowVectorXd min_, max_;
  double low_ = 0.0, high_ = 0.0;
};

// Fits on X itself and applies.
Eigen::MatrixXd scale_features(const Eigen::MatrixXd& X);

// Header `f0,...,f{d-1},label`; values printed with round-trip precision.
void write_csv(std::ostream& out, const Dataset& data);
Dataset read_csv(std::istream& in);

}  // namespace dqclab
