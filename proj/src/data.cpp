#include "dqclab/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dqclab/random.hpp"

namespace dqclab {

const DatasetPreset& dataset_preset(int id) {
  static const DatasetPreset presets[] = {{1, 6, 2.0}, {2, 5, 1.5}, {3, 3, 1.0}};
  if (id < 1 || id > 3) throw std::invalid_argument("unknown dataset preset " + std::to_string(id));
  return presets[id - 1];
}

Eigen::MatrixXd Dataset::one_hot(int classes) const {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(rows(), classes);
  for (Eigen::Index i = 0; i < rows(); ++i) y(i, labels(i)) = 1.0;
  return y;
}

Dataset Dataset::subset(std::span<const Eigen::Index> rows) const {
  Dataset out;
  out.preset_id = preset_id;
  out.seed = seed;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(i) = X.row(rows[i]);
    out.labels(i) = labels(rows[i]);
  }
  return out;
}

namespace {

std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, RandomStream& rng) {
  std::vector<Eigen::Index> idx(n);
  for (Eigen::Index i = 0; i < n; ++i) idx[i] = i;
  for (Eigen::Index i = n - 1; i > 0; --i)
    std::swap(idx[i], idx[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  return idx;
}

}  // namespace

Dataset generate(int preset_id, std::uint64_t seed, int n_samples, int n_features) {
  const DatasetPreset& preset = dataset_preset(preset_id);
  if (n_samples < 2) throw std::invalid_argument("dataset needs at least two samples");
  if (n_features < preset.n_informative)
    throw std::invalid_argument("feature count below the preset's informative dimension");

  RandomStream rng(seed, static_cast<std::uint64_t>(preset_id));
  const int n_inf = preset.n_informative;
  const int rest = n_features - n_inf;
  const int n_redundant = (rest + 1) / 2;

  Eigen::VectorXd vertex(n_inf);
  for (int j = 0; j < n_inf; ++j) vertex(j) = preset.class_sep * rng.rademacher();
  Eigen::MatrixXd mixing(n_inf, n_redundant);
  for (int j = 0; j < n_inf; ++j)
    for (int r = 0; r < n_redundant; ++r) mixing(j, r) = 2.0 * rng.uniform() - 1.0;

  Eigen::MatrixXd X(n_samples, n_features);
  Eigen::VectorXi labels(n_samples);
  const int n_class0 = (n_samples + 1) / 2;
  for (int i = 0; i < n_samples; ++i) {
    const int label = i < n_class0 ? 0 : 1;
    labels(i) = label;
    const double sign = label == 0 ? 1.0 : -1.0;
    for (int j = 0; j < n_inf; ++j) X(i, j) = sign * vertex(j) + rng.normal();
  }
  if (n_redundant > 0) X.middleCols(n_inf, n_redundant) = X.leftCols(n_inf) * mixing;
  for (int i = 0; i < n_samples; ++i)
    for (int j = n_inf + n_redundant; j < n_features; ++j) X(i, j) = rng.normal();

  const auto order = shuffled_indices(n_samples, rng);
  Dataset base{std::move(X), std::move(labels), preset_id, seed};
  return base.subset(order);
}

Splits split(const Dataset& data, std::uint64_t seed) {
  const Eigen::Index n = data.rows();
  if (n < 3) throw std::invalid_argument("split needs at least three rows");
  RandomStream rng(seed, 0x5b1d);
  const auto order = shuffled_indices(n, rng);
  const auto n_train = static_cast<Eigen::Index>(std::llround(0.70 * static_cast<double>(n)));
  const auto n_val = static_cast<Eigen::Index>(std::llround(0.15 * static_cast<double>(n)));

  Splits s;
  s.train_rows.assign(order.begin(), order.begin() + n_train);
  s.validation_rows.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  s.test_rows.assign(order.begin() + n_train + n_val, order.end());
  s.train = data.subset(s.train_rows);
  s.validation = data.subset(s.validation_rows);
  s.test = data.subset(s.test_rows);
  return s;
}

FeatureScaler FeatureScaler::fit(const Eigen::MatrixXd& train, double low, double high) {
  if (train.rows() == 0) throw std::invalid_argument("cannot fit a scaler on an empty matrix");
  if (!train.allFinite()) throw std::invalid_argument("feature matrix has non-finite entries");
  FeatureScaler s;
  s.min_ = train.colwise().minCoeff();
  s.max_ = train.colwise().maxCoeff();
  s.low_ = low;
  s.high_ = high;
  return s;
}

Eigen::MatrixXd FeatureScaler::transform(const Eigen::MatrixXd& X) const {
  if (X.cols() != min_.size()) throw std::invalid_argument("scaler column count mismatch");
  Eigen::MatrixXd out(X.rows(), X.cols());
  const double mid = 0.5 * (low_ + high_);
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double span = max_(j) - min_(j);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (span <= 0.0) {
        out(i, j) = mid;
        continue;
      }
      const double v = low_ + (X(i, j) - min_(j)) / span * (high_ - low_);
      out(i, j) = std::clamp(v, low_, high_);
    }
  }
  return out;
}

Eigen::MatrixXd scale_features(const Eigen::MatrixXd& X) { return FeatureScaler::fit(X).transform(X); }

void write_csv(std::ostream& out, const Dataset& data) {
  for (Eigen::Index j = 0; j < data.X.cols(); ++j) out << 'f' << j << ',';
  out << "label\n";
  char buf[40];
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.X(i, j));
      out << buf << ',';
    }
    out << data.labels(i) << '\n';
  }
}

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset CSV is empty");
  const auto n_cols = std::count(line.begin(), line.end(), ',') + 1;
  if (n_cols < 2 || !line.ends_with("label"))
    throw std::runtime_error("dataset CSV header must be f0,...,label");
  const Eigen::Index n_features = n_cols - 1;

  std::vector<double> values;
  std::vector<int> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    Eigen::Index col = 0;
    while (std::getline(row, cell, ',')) {
      char* end = nullptr;
      if (col < n_features) {
        values.push_back(std::strtod(cell.c_str(), &end));
      } else {
        const long v = std::strtol(cell.c_str(), &end, 10);
        if (v != 0 && v != 1) throw std::runtime_error("label must be 0 or 1 on line " + std::to_string(line_no));
        labels.push_back(static_cast<int>(v));
      }
      if (end == cell.c_str()) throw std::runtime_error("bad CSV cell on line " + std::to_string(line_no));
      ++col;
    }
    if (col != n_cols) throw std::runtime_error("wrong column count on line " + std::to_string(line_no));
  }
  Dataset d;
  const auto n = static_cast<Eigen::Index>(labels.size());
  d.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, n_features);
  d.labels = Eigen::Map<const Eigen::VectorXi>(labels.data(), n);
  return d;
}

}  // namespace dqclab
