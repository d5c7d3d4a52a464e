#include "dqclab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "dqclab/data.hpp"
#include "dqclab/parallel.hpp"
#include "dqclab/random.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dqclab {

std::string DatasetSpec::name() const {
  return "preset" + std::to_string(preset) + "_seed" + std::to_string(seed);
}

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw std::invalid_argument("config: datasets must not be empty");
  if (architectures.empty()) throw std::invalid_argument("config: architectures must not be empty");
  if (seeds.empty()) throw std::invalid_argument("config: seeds must not be empty");
  for (const DatasetSpec& d : datasets) dataset_preset(d.preset);
  if (!(noise_p >= 0.0 && noise_p <= 1.0)) throw std::invalid_argument("config: noise_p must lie in [0, 1]");
  if (test_shots < 1) throw std::invalid_argument("config: test shots must be positive");
  topology.validate();
  if (n_qubits > topology.capacity())
    throw std::invalid_argument("config: VQC qubits exceed the topology's data capacity");
  for (ArchitectureKind k : architectures) architecture(k).validate();
  train.validate();
  if (train.batch_size > 700) throw std::invalid_argument("config: batch_size exceeds the training split");
}

Architecture ExperimentConfig::architecture(ArchitectureKind kind) const {
  Architecture a = make_architecture(kind, n_qubits, n_layers);
  a.global_period = global_period;
  return a;
}

void ExperimentConfig::apply_fast_mode() {
  test_shots = std::min(test_shots, 200);
  train.shots = std::min(train.shots, 200);
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.datasets = {{1, 0}, {2, 0}, {3, 0}};
  c.architectures = all_architecture_kinds();
  for (std::uint64_t s = 0; s < 10; ++s) c.seeds.push_back(s);
  c.train.iterations = 1000;
  c.train.batch_size = 64;
  c.train.shots = 1000;
  c.train.eval_every = 10;
  c.test_shots = 1000;
  c.noise_p = 0.03;
  return c;
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end())
      throw std::invalid_argument("config: unknown key '" + where + key + "'");
  }
}

template <typename T>
void read_if(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

// "train.spsa.a": 0.2 is accepted as shorthand for {"train": {"spsa": {"a": 0.2}}}.
json unflatten_keys(const json& j) {
  if (!j.is_object()) return j;
  json out = json::object();
  for (const auto& [key, value] : j.items()) {
    json* node = &out;
    std::size_t start = 0, dot;
    while ((dot = key.find('.', start)) != std::string::npos) {
      node = &(*node)[key.substr(start, dot - start)];
      if (!node->is_null() && !node->is_object()) throw std::invalid_argument("config: conflicting key '" + key + "'");
      start = dot + 1;
    }
    json& leaf = (*node)[key.substr(start)];
    const json v = unflatten_keys(value);
    if (leaf.is_object() && v.is_object())
      leaf.update(v, true);
    else if (!leaf.is_null())
      throw std::invalid_argument("config: duplicate key '" + key + "'");
    else
      leaf = v;
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = unflatten_keys(json::parse(json_text));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  ExperimentConfig c = default_config();
  try {
    reject_unknown(j, {"datasets", "architectures", "seeds", "vqc", "train", "test", "noise_p",
                       "topology", "output_dir"}, "");
    if (j.contains("datasets")) {
      c.datasets.clear();
      for (const json& d : j.at("datasets"))
        c.datasets.push_back({d.at("preset").get<int>(), d.at("seed").get<std::uint64_t>()});
    }
    if (j.contains("architectures")) {
      c.architectures.clear();
      for (const json& a : j.at("architectures"))
        c.architectures.push_back(parse_architecture_kind(a.get<std::string>()));
    }
    read_if(j, "seeds", c.seeds);
    if (j.contains("vqc")) {
      const json& v = j.at("vqc");
      reject_unknown(v, {"qubits", "layers", "global_period"}, "vqc.");
      read_if(v, "qubits", c.n_qubits);
      read_if(v, "layers", c.n_layers);
      read_if(v, "global_period", c.global_period);
    }
    if (j.contains("train")) {
      const json& t = j.at("train");
      reject_unknown(t, {"iterations", "batch_size", "shots", "eval_every", "exact", "init_range", "spsa"},
                     "train.");
      read_if(t, "iterations", c.train.iterations);
      read_if(t, "batch_size", c.train.batch_size);
      read_if(t, "shots", c.train.shots);
      read_if(t, "eval_every", c.train.eval_every);
      read_if(t, "exact", c.train.exact);
      read_if(t, "init_range", c.train.init_range);
      if (t.contains("spsa")) {
        const json& s = t.at("spsa");
        reject_unknown(s, {"a", "c", "A", "alpha", "gamma"}, "train.spsa.");
        read_if(s, "a", c.train.spsa.a);
        read_if(s, "c", c.train.spsa.c);
        read_if(s, "A", c.train.spsa.A);
        read_if(s, "alpha", c.train.spsa.alpha);
        read_if(s, "gamma", c.train.spsa.gamma);
      }
    }
    if (j.contains("test")) {
      reject_unknown(j.at("test"), {"shots"}, "test.");
      read_if(j.at("test"), "shots", c.test_shots);
    }
    read_if(j, "noise_p", c.noise_p);
    if (j.contains("topology")) {
      const json& t = j.at("topology");
      reject_unknown(t, {"n_qpus", "data_per_qpu", "comm_per_qpu"}, "topology.");
      read_if(t, "n_qpus", c.topology.n_qpus);
      read_if(t, "data_per_qpu", c.topology.data_per_qpu);
      read_if(t, "comm_per_qpu", c.topology.comm_per_qpu);
    }
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.train.spsa.iterations = c.train.iterations;
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) { return parse_config(read_file(path)); }

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["datasets"] = json::array();
  for (const DatasetSpec& d : c.datasets) j["datasets"].push_back({{"preset", d.preset}, {"seed", d.seed}});
  j["architectures"] = json::array();
  for (ArchitectureKind k : c.architectures) j["architectures"].push_back(std::string(to_string(k)));
  j["seeds"] = c.seeds;
  j["vqc"] = {{"qubits", c.n_qubits}, {"layers", c.n_layers}, {"global_period", c.global_period}};
  j["train"] = {{"iterations", c.train.iterations},
                {"batch_size", c.train.batch_size},
                {"shots", c.train.shots},
                {"eval_every", c.train.eval_every},
                {"exact", c.train.exact},
                {"init_range", c.train.init_range},
                {"spsa",
                 {{"a", c.train.spsa.a},
                  {"c", c.train.spsa.c},
                  {"A", c.train.spsa.A},
                  {"alpha", c.train.spsa.alpha},
                  {"gamma", c.train.spsa.gamma}}}};
  j["test"] = {{"shots", c.test_shots}};
  j["noise_p"] = c.noise_p;
  j["topology"] = {{"n_qpus", c.topology.n_qpus},
                   {"data_per_qpu", c.topology.data_per_qpu},
                   {"comm_per_qpu", c.topology.comm_per_qpu}};
  j["output_dir"] = c.output_dir.string();
  return j.dump(2) + "\n";
}

fs::path dataset_path(const ExperimentConfig& config, const DatasetSpec& dataset) {
  return config.output_dir / "data" / (dataset.name() + ".csv");
}

fs::path cell_dir(const fs::path& out, const DatasetSpec& dataset, ArchitectureKind kind,
                  std::uint64_t seed) {
  return out / dataset.name() / std::string(to_string(kind)) / std::to_string(seed);
}

std::vector<fs::path> cmd_gen_data(const ExperimentConfig& config) {
  config.validate();
  std::vector<fs::path> written;
  for (const DatasetSpec& d : config.datasets) {
    std::ostringstream csv;
    write_csv(csv, generate(d.preset, d.seed));
    const fs::path path = dataset_path(config, d);
    write_file(path, csv.str());
    written.push_back(path);
  }
  return written;
}

namespace {

struct PreparedData {
  LabeledBatch train, validation, test;
};

PreparedData prepare(const ExperimentConfig& config, const DatasetSpec& dataset) {
  const fs::path path = dataset_path(config, dataset);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataset file " + path.string() + " not found; run gen-data first");
  Dataset data = read_csv(in);
  data.preset_id = dataset.preset;
  data.seed = dataset.seed;
  if (data.X.cols() != config.n_qubits)
    throw std::runtime_error("dataset " + path.string() + " has " + std::to_string(data.X.cols()) +
                             " features; the VQC encodes " + std::to_string(config.n_qubits));
  const Splits s = split(data, dataset.seed);
  const FeatureScaler scaler = FeatureScaler::fit(s.train.X);
  return {{scaler.transform(s.train.X), s.train.one_hot()},
          {scaler.transform(s.validation.X), s.validation.one_hot()},
          {scaler.transform(s.test.X), s.test.one_hot()}};
}

std::uint64_t cell_seed(const DatasetSpec& dataset, ArchitectureKind kind, std::uint64_t seed) {
  return derive_seed(seed, derive_seed(static_cast<std::uint64_t>(dataset.preset), dataset.seed),
                     static_cast<std::uint64_t>(kind));
}

}  // namespace

TrainRecord cmd_train(const ExperimentConfig& config, const DatasetSpec& dataset,
                      ArchitectureKind kind, std::uint64_t seed, int threads) {
  config.validate();
  const PreparedData data = prepare(config, dataset);
  const Classifier model(config.architecture(kind), config.topology);
  // The run seed alone drives training so that architectures share theta0 and
  // minibatch order for a given seed.
  const TrainResult result = train_classifier(model, data.train, data.validation, config.train, seed, threads);

  const fs::path dir = cell_dir(config.output_dir, dataset, kind, seed);
  write_file(dir / "history.csv", history_csv(result.history));
  if (result.failure) throw std::runtime_error("training aborted: " + *result.failure);

  json theta = {{"dataset", dataset.name()},
                {"architecture", std::string(to_string(kind))},
                {"seed", seed},
                {"theta", std::vector<double>(result.theta.data(), result.theta.data() + result.theta.size())}};
  write_file(dir / "theta.json", theta.dump(2) + "\n");

  TrainRecord record;
  record.history = result.history;
  record.theta = result.theta;
  if (!result.history.empty() && result.history.back().val_accuracy)
    record.final_val_accuracy = *result.history.back().val_accuracy;
  else
    record.final_val_accuracy = evaluate_accuracy(model, result.theta, data.validation,
                                                  ExecutionMode::MonolithicIdeal, ForwardOptions{}, seed);
  return record;
}

TestRecord cmd_test(const ExperimentConfig& config, const DatasetSpec& dataset,
                    ArchitectureKind kind, std::uint64_t seed, int threads) {
  config.validate();
  const fs::path dir = cell_dir(config.output_dir, dataset, kind, seed);
  if (!fs::exists(dir / "theta.json"))
    throw std::runtime_error("missing " + (dir / "theta.json").string() + "; run train first");
  const json stored = json::parse(read_file(dir / "theta.json"));
  const auto values = stored.at("theta").get<std::vector<double>>();
  const Classifier model(config.architecture(kind), config.topology);
  if (static_cast<int>(values.size()) != model.parameter_count())
    throw std::runtime_error("theta.json holds " + std::to_string(values.size()) + " parameters, expected " +
                             std::to_string(model.parameter_count()));
  const Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  const PreparedData data = prepare(config, dataset);

  ForwardOptions options;
  options.shots = config.test_shots;
  options.noise_p = config.noise_p;
  options.exact = true;
  options.threads = threads;
  const std::uint64_t base = cell_seed(dataset, kind, seed);

  TestRecord r;
  r.monolithic_ideal = evaluate_accuracy(model, theta, data.test, ExecutionMode::MonolithicIdeal, options, base);
  r.distributed_ideal = evaluate_accuracy(model, theta, data.test, ExecutionMode::DistributedIdeal, options, base);
  r.distributed_noisy =
      evaluate_accuracy(model, theta, data.test, ExecutionMode::DistributedNoisy, options, derive_seed(base, 1));
  r.remote_cx_count = count_remote(model.monolithic(), config.topology);

  json out = {{"dataset", dataset.name()},
              {"architecture", std::string(to_string(kind))},
              {"seed", seed},
              {"monolithic_ideal", r.monolithic_ideal},
              {"distributed_ideal", r.distributed_ideal},
              {"distributed_noisy", r.distributed_noisy},
              {"remote_cx_count", r.remote_cx_count},
              {"shots", config.test_shots},
              {"noise_p", config.noise_p}};
  write_file(dir / "test.json", out.dump(2) + "\n");
  return r;
}

BoxStats box_stats(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("box_stats: empty sample");
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  BoxStats b;
  b.min = v.front();
  b.max = v.back();
  b.q1 = quantile(0.25);
  b.median = quantile(0.5);
  b.q3 = quantile(0.75);
  double sum = 0.0;
  for (double x : v) sum += x;
  b.mean = sum / static_cast<double>(v.size());
  return b;
}

namespace {

struct CellRecord {
  std::uint64_t seed = 0;
  json test;
  std::vector<HistoryRow> history;
};

std::vector<HistoryRow> read_history(const fs::path& path) {
  std::vector<HistoryRow> rows;
  std::istringstream in(read_file(path));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("malformed history row in " + path.string());
    HistoryRow r;
    r.iteration = std::stoi(line.substr(0, c1));
    r.loss = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    if (c2 + 1 < line.size()) r.val_accuracy = std::stod(line.substr(c2 + 1));
    rows.push_back(r);
  }
  return rows;
}

json box_json(const BoxStats& b) {
  return {{"min", b.min}, {"q1", b.q1}, {"median", b.median}, {"q3", b.q3}, {"max", b.max}, {"mean", b.mean}};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int cmd_report(const fs::path& out_dir) {
  if (!fs::is_directory(out_dir)) throw std::runtime_error("report: " + out_dir.string() + " is not a directory");
  // (dataset, architecture) -> cells ordered by seed
  std::map<std::pair<std::string, std::string>, std::vector<CellRecord>> groups;
  int cells = 0;
  for (const auto& ds : fs::directory_iterator(out_dir)) {
    if (!ds.is_directory() || !ds.path().filename().string().starts_with("preset")) continue;
    for (const auto& arch : fs::directory_iterator(ds.path())) {
      if (!arch.is_directory()) continue;
      for (const auto& cell : fs::directory_iterator(arch.path())) {
        const fs::path test = cell.path() / "test.json";
        if (!cell.is_directory() || !fs::exists(test)) continue;
        CellRecord r;
        r.seed = std::stoull(cell.path().filename().string());
        r.test = json::parse(read_file(test));
        if (fs::exists(cell.path() / "history.csv")) r.history = read_history(cell.path() / "history.csv");
        groups[{ds.path().filename().string(), arch.path().filename().string()}].push_back(std::move(r));
        ++cells;
      }
    }
  }
  if (cells == 0) throw std::runtime_error("report: no test records under " + out_dir.string());

  std::string curves = "dataset,architecture,iteration,mean,std,n\n";
  std::string tests = "dataset,architecture,mode,min,q1,median,q3,max,mean,n\n";
  std::string remote = "dataset,architecture,remote_cx_count\n";
  json summary_groups = json::array();

  for (auto& [key, records] : groups) {
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.seed < b.seed; });
    const auto& [dataset, arch] = key;

    std::map<int, std::vector<double>> by_iteration;
    for (const CellRecord& r : records)
      for (const HistoryRow& h : r.history)
        if (h.val_accuracy) by_iteration[h.iteration].push_back(*h.val_accuracy);
    json final_val = nullptr;
    for (const auto& [it, vals] : by_iteration) {
      double mean = 0.0, var = 0.0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      for (double v : vals) var += (v - mean) * (v - mean);
      const double stddev = std::sqrt(var / static_cast<double>(vals.size()));
      curves += dataset + "," + arch + "," + std::to_string(it) + "," + fmt(mean) + "," + fmt(stddev) + "," +
                std::to_string(vals.size()) + "\n";
      final_val = {{"iteration", it}, {"mean", mean}, {"std", stddev}};
    }

    json group = {{"dataset", dataset}, {"architecture", arch}, {"seeds", json::array()},
                  {"final_validation_accuracy", final_val}};
    for (const CellRecord& r : records) group["seeds"].push_back(r.seed);
    json test_block;
    for (const char* mode : {"monolithic_ideal", "distributed_ideal", "distributed_noisy"}) {
      std::vector<double> vals;
      for (const CellRecord& r : records) vals.push_back(r.test.at(mode).get<double>());
      const BoxStats b = box_stats(vals);
      test_block[mode] = box_json(b);
      tests += dataset + "," + arch + "," + mode + "," + fmt(b.min) + "," + fmt(b.q1) + "," + fmt(b.median) + "," +
               fmt(b.q3) + "," + fmt(b.max) + "," + fmt(b.mean) + "," + std::to_string(vals.size()) + "\n";
    }
    group["test_accuracy"] = test_block;
    const int count = records.front().test.at("remote_cx_count").get<int>();
    group["remote_cx_count"] = count;
    remote += dataset + "," + arch + "," + std::to_string(count) + "\n";
    summary_groups.push_back(group);
  }

  json summary = {{"generated_at", timestamp_utc()}, {"cells", cells}, {"groups", summary_groups}};
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  write_file(out_dir / "report" / "validation_curves.csv", curves);
  write_file(out_dir / "report" / "test_accuracy.csv", tests);
  write_file(out_dir / "report" / "remote_cx.csv", remote);
  return cells;
}

void run_all(const ExperimentConfig& config, int workers) {
  cmd_gen_data(config);
  struct Cell {
    DatasetSpec dataset;
    ArchitectureKind kind;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const DatasetSpec& d : config.datasets)
    for (ArchitectureKind k : config.architectures)
      for (std::uint64_t s : config.seeds) cells.push_back({d, k, s});
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    cmd_train(config, cells[i].dataset, cells[i].kind, cells[i].seed);
    cmd_test(config, cells[i].dataset, cells[i].kind, cells[i].seed);
  });
  cmd_report(config.output_dir);
}

}  // namespace dqclab
