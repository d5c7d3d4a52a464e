#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dqclab/ansatz.hpp"
#include "dqclab/circuit.hpp"
#include "dqclab/dqc.hpp"
#include "dqclab/experiment.hpp"
#include "dqclab/parallel.hpp"

namespace {

using namespace dqclab;

struct Common {
  std::string config_path;
  std::string out_dir;
  int workers = 1;
  bool fast = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out_dir, "output directory (overrides the config)");
  cmd->add_option("--workers", c.workers, "parallel workers")->check(CLI::PositiveNumber);
  cmd->add_flag("--fast", c.fast, "reduce shots to 200");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config_path.empty() ? default_config() : load_config(c.config_path);
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  if (c.fast) cfg.apply_fast_mode();
  cfg.validate();
  return cfg;
}

struct CellFilter {
  std::optional<int> preset;
  std::optional<std::uint64_t> data_seed;
  std::optional<std::string> arch;
  std::optional<std::uint64_t> seed;
};

void add_filter(CLI::App* cmd, CellFilter& f) {
  cmd->add_option("--preset", f.preset, "only this dataset preset");
  cmd->add_option("--data-seed", f.data_seed, "only this dataset seed");
  cmd->add_option("--arch", f.arch, "only this architecture");
  cmd->add_option("--seed", f.seed, "only this run seed");
}

struct Cell {
  DatasetSpec dataset;
  ArchitectureKind kind;
  std::uint64_t seed;
};

std::vector<Cell> select_cells(const ExperimentConfig& cfg, const CellFilter& f) {
  std::optional<ArchitectureKind> kind;
  if (f.arch) kind = parse_architecture_kind(*f.arch);
  std::vector<Cell> cells;
  for (const DatasetSpec& d : cfg.datasets) {
    if ((f.preset && d.preset != *f.preset) || (f.data_seed && d.seed != *f.data_seed)) continue;
    for (ArchitectureKind k : cfg.architectures) {
      if (kind && k != *kind) continue;
      for (std::uint64_t s : cfg.seeds)
        if (!f.seed || s == *f.seed) cells.push_back({d, k, s});
    }
  }
  if (cells.empty()) throw std::invalid_argument("no (dataset, architecture, seed) cell matches the selection");
  return cells;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed variational quantum classifier lab"};
  app.require_subcommand(1);

  Common gen_opts, train_opts, test_opts, all_opts, topo_opts, count_opts;
  CellFilter train_filter, test_filter;

  auto* gen = app.add_subcommand("gen-data", "write the configured synthetic datasets as CSV");
  add_common(gen, gen_opts);

  auto* train = app.add_subcommand("train", "train selected cells monolithically without noise");
  add_common(train, train_opts);
  add_filter(train, train_filter);

  auto* test = app.add_subcommand("test", "evaluate trained cells ideally and under distributed noise");
  add_common(test, test_opts);
  add_filter(test, test_filter);

  std::string transform_in = "-", transform_out;
  auto* transform = app.add_subcommand("transform", "rewrite a circuit for the distributed topology");
  transform->add_option("input", transform_in, "circuit text file ('-' for stdin)");
  transform->add_option("-o,--output", transform_out, "output file (stdout if omitted)");
  transform->add_option("--config", topo_opts.config_path, "config supplying the topology")->check(CLI::ExistingFile);

  std::string count_in;
  std::optional<std::string> count_arch;
  auto* count = app.add_subcommand("count-remote", "count CX gates that cross QPU boundaries");
  count->add_option("input", count_in, "circuit text file ('-' for stdin)");
  count->add_option("--arch", count_arch, "count for a built architecture instead of a file");
  count->add_option("--config", count_opts.config_path, "config supplying topology and VQC shape")
      ->check(CLI::ExistingFile);

  std::string report_dir = "out";
  auto* report = app.add_subcommand("report", "aggregate cell results into summary.json and CSVs");
  report->add_option("--out", report_dir, "output directory holding the cells");

  auto* all = app.add_subcommand("run-all", "generate, train, test and report the whole grid");
  add_common(all, all_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      for (const auto& path : cmd_gen_data(resolve(gen_opts))) std::cout << path.string() << "\n";
    } else if (*train) {
      const ExperimentConfig cfg = resolve(train_opts);
      const auto cells = select_cells(cfg, train_filter);
      std::vector<double> acc(cells.size());
      parallel_for(cells.size(), train_opts.workers, [&](std::size_t i) {
        acc[i] = cmd_train(cfg, cells[i].dataset, cells[i].kind, cells[i].seed).final_val_accuracy;
      });
      for (std::size_t i = 0; i < cells.size(); ++i)
        std::printf("%s %s seed=%llu val_accuracy=%.4f\n", cells[i].dataset.name().c_str(),
                    std::string(to_string(cells[i].kind)).c_str(),
                    static_cast<unsigned long long>(cells[i].seed), acc[i]);
    } else if (*test) {
      const ExperimentConfig cfg = resolve(test_opts);
      const auto cells = select_cells(cfg, test_filter);
      std::vector<TestRecord> rec(cells.size());
      parallel_for(cells.size(), test_opts.workers, [&](std::size_t i) {
        rec[i] = cmd_test(cfg, cells[i].dataset, cells[i].kind, cells[i].seed);
      });
      for (std::size_t i = 0; i < cells.size(); ++i)
        std::printf("%s %s seed=%llu monolithic_ideal=%.4f distributed_noisy=%.4f remote_cx=%d\n",
                    cells[i].dataset.name().c_str(), std::string(to_string(cells[i].kind)).c_str(),
                    static_cast<unsigned long long>(cells[i].seed), rec[i].monolithic_ideal,
                    rec[i].distributed_noisy, rec[i].remote_cx_count);
    } else if (*transform) {
      const ExperimentConfig cfg = resolve(topo_opts);
      const std::string text = dump_text(dqclab::transform(parse_text(read_input(transform_in)), cfg.topology));
      if (transform_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(transform_out);
        if (!(out << text)) throw std::runtime_error("cannot write " + transform_out);
      }
    } else if (*count) {
      const ExperimentConfig cfg = resolve(count_opts);
      if (count_arch.has_value() == !count_in.empty())
        throw std::invalid_argument("count-remote needs exactly one of a circuit file or --arch");
      const Circuit c = count_arch ? build(cfg.architecture(parse_architecture_kind(*count_arch)))
                                   : parse_text(read_input(count_in));
      std::cout << count_remote(c, cfg.topology) << "\n";
    } else if (*report) {
      const int cells = cmd_report(report_dir);
      std::cout << "summarized " << cells << " cells into " << report_dir << "/summary.json\n";
    } else if (*all) {
      const ExperimentConfig cfg = resolve(all_opts);
      run_all(cfg, all_opts.workers);
      std::cout << "wrote " << cfg.output_dir.string() << "/summary.json\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
