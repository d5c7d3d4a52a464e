#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dqclab/ansatz.hpp"
#include "dqclab/dqc.hpp"
#include "dqclab/qml.hpp"

namespace dqclab {

struct DatasetSpec {
  int preset = 1;
  std::uint64_t seed = 0;

  // Directory and file stem, e.g. "preset1_seed0".
  std::string name() const;
  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<ArchitectureKind> architectures;
  std::vector<std::uint64_t> seeds;
  int n_qubits = 8;
  int n_layers = 10;
  int global_period = 4;
  TrainConfig train;
  int test_shots = 1000;
  double noise_p = 0.03;
  Topology topology;
  std::filesystem::path output_dir = "out";

  void validate() const;
  Architecture architecture(ArchitectureKind kind) const;
  // Shot counts drop to 200 for quick runs.
  void apply_fast_mode();
};

// The full experimental grid: 3 datasets x 4
// architectures x 10 seeds, 1000 SPSA iterations on batches of 64, 1000 shots,
// depolarizing p = 0.03, 4 QPUs with 2 data + 2 communication qubits.
ExperimentConfig default_config();
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

std::filesystem::path dataset_path(const ExperimentConfig& config, const DatasetSpec& dataset);
std::filesystem::path cell_dir(const std::filesystem::path& out, const DatasetSpec& dataset,
                               ArchitectureKind kind, std::uint64_t seed);

// Writes one CSV per configured dataset; validates the whole config first.
std::vector<std::filesystem::path> cmd_gen_data(const ExperimentConfig& config);

struct TrainRecord {
  std::vector<HistoryRow> history;
  Eigen::VectorXd theta;
  double final_val_accuracy = 0.0;
};

// Trains monolithically and noiselessly; writes history.csv and theta.json in
// the cell directory. On a non-finite loss the partial history is written and
// std::runtime_error is thrown.
TrainRecord cmd_train(const ExperimentConfig& config, const DatasetSpec& dataset,
                      ArchitectureKind kind, std::uint64_t seed, int threads = 1);

struct TestRecord {
  double monolithic_ideal = 0.0;
  double distributed_noisy = 0.0;
  double distributed_ideal = 0.0;
  int remote_cx_count = 0;
};

// Evaluates the test split in MONOLITHIC_IDEAL, DISTRIBUTED_IDEAL (both exact)
// and DISTRIBUTED_NOISY; writes test.json.
TestRecord cmd_test(const ExperimentConfig& config, const DatasetSpec& dataset,
                    ArchitectureKind kind, std::uint64_t seed, int threads = 1);

struct BoxStats {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
};

// Linear-interpolation quartiles of a non-empty sample.
BoxStats box_stats(std::vector<double> values);

// Aggregates every cell under out_dir into summary.json and report/*.csv.
// Returns the number of cells read; throws when there are none.
int cmd_report(const std::filesystem::path& out_dir);

// gen-data, then train + test for every (dataset, architecture, seed) cell on
// `workers` threads, then report.
void run_all(const ExperimentConfig& config, int workers);

}  // namespace dqclab
