#include <gtest/gtest.h>

#include <numbers>
#include <set>
#include <sstream>

#include "dqclab/data.hpp"

using namespace dqclab;

namespace {

constexpr double kPi = std::numbers::pi;

// Least-squares linear classifier fitted and scored on the same data.
double least_squares_accuracy(const Dataset& d) {
  Eigen::MatrixXd A(d.rows(), d.X.cols() + 1);
  A << d.X, Eigen::VectorXd::Ones(d.rows());
  const Eigen::VectorXd target = (2 * d.labels.cast<double>().array() - 1).matrix();
  const Eigen::VectorXd w = A.colPivHouseholderQr().solve(target);
  const Eigen::VectorXd pred = A * w;
  int correct = 0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) correct += (pred(i) > 0) == (d.labels(i) == 1);
  return static_cast<double>(correct) / d.rows();
}

}  // namespace

TEST(Data, ShapeAndBalance) {
  const Dataset d = generate(1, 0);
  EXPECT_EQ(d.X.rows(), 1000);
  EXPECT_EQ(d.X.cols(), 8);
  const int ones = d.labels.sum();
  EXPECT_NEAR(ones, 500, 25);
  EXPECT_TRUE(d.X.allFinite());
  EXPECT_EQ(d.one_hot().rowwise().sum(), Eigen::VectorXd::Ones(1000));
}

TEST(Data, Deterministic) {
  for (int preset : {1, 2, 3}) {
    const Dataset a = generate(preset, 4), b = generate(preset, 4);
    EXPECT_EQ(a.X, b.X);
    EXPECT_EQ(a.labels, b.labels);
  }
  EXPECT_NE(generate(1, 0).X, generate(1, 1).X);
}

TEST(Data, GradedSeparability) {
  for (std::uint64_t seed : {0, 1, 2}) {
    const double s1 = least_squares_accuracy(generate(1, seed));
    const double s2 = least_squares_accuracy(generate(2, seed));
    const double s3 = least_squares_accuracy(generate(3, seed));
    EXPECT_GE(s1, 0.95) << seed;
    EXPECT_LE(s3, s1) << seed;
    EXPECT_LE(s3, s2 + 0.02) << seed;
  }
}

TEST(Data, UnknownPreset) {
  EXPECT_THROW(generate(0, 0), std::invalid_argument);
  EXPECT_THROW(generate(4, 0), std::invalid_argument);
  EXPECT_THROW(dataset_preset(9), std::invalid_argument);
}

TEST(Data, SplitPartition) {
  const Dataset d = generate(2, 0);
  const Splits s = split(d, 0);
  EXPECT_EQ(s.train.rows(), 700);
  EXPECT_EQ(s.validation.rows(), 150);
  EXPECT_EQ(s.test.rows(), 150);
  std::set<Eigen::Index> all;
  for (const auto* rows : {&s.train_rows, &s.validation_rows, &s.test_rows}) all.insert(rows->begin(), rows->end());
  EXPECT_EQ(all.size(), 1000u);
  EXPECT_EQ(*all.begin(), 0);
  EXPECT_EQ(*all.rbegin(), 999);
  EXPECT_EQ(s.train.X.row(5), d.X.row(s.train_rows[5]));
  EXPECT_EQ(split(d, 0).train_rows, s.train_rows);
  EXPECT_NE(split(d, 1).train_rows, s.train_rows);
}

TEST(Scaler, AffineMapClampAndConstantColumns) {
  Eigen::MatrixXd train(3, 2);
  train << 0, 7, 5, 7, 10, 7;
  const FeatureScaler scaler = FeatureScaler::fit(train);
  const Eigen::MatrixXd t = scaler.transform(train);
  EXPECT_NEAR(t(0, 0), -kPi, 1e-15);
  EXPECT_NEAR(t(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(t(2, 0), kPi, 1e-15);
  EXPECT_EQ(t.col(1), Eigen::Vector3d::Zero());
  Eigen::MatrixXd probe(2, 2);
  probe << -5, 7, 25, 100;
  const Eigen::MatrixXd p = scaler.transform(probe);
  EXPECT_DOUBLE_EQ(p(0, 0), -kPi);
  EXPECT_DOUBLE_EQ(p(1, 0), kPi);
  EXPECT_DOUBLE_EQ(p(1, 1), 0.0);
  EXPECT_TRUE(scale_features(train).isApprox(t));
  EXPECT_THROW(scaler.transform(Eigen::MatrixXd::Zero(1, 3)), std::invalid_argument);
}

TEST(Scaler, GeneratedTestSplitStaysInRange) {
  const Splits s = split(generate(3, 2), 2);
  const FeatureScaler scaler = FeatureScaler::fit(s.train.X);
  const Eigen::MatrixXd t = scaler.transform(s.test.X);
  EXPECT_LE(t.maxCoeff(), kPi);
  EXPECT_GE(t.minCoeff(), -kPi);
}

TEST(Csv, RoundTripIsExact) {
  const Dataset d = generate(1, 3, 50);
  std::stringstream io;
  write_csv(io, d);
  const std::string text = io.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "f0,f1,f2,f3,f4,f5,f6,f7,label");
  const Dataset back = read_csv(io);
  EXPECT_EQ(back.X, d.X);
  EXPECT_EQ(back.labels, d.labels);
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), std::runtime_error);
  std::istringstream bad_label("f0,label\n0.5,2\n");
  EXPECT_THROW(read_csv(bad_label), std::runtime_error);
  std::istringstream short_row("f0,f1,label\n0.5,1\n");
  EXPECT_THROW(read_csv(short_row), std::runtime_error);
}
