// Copyright 2026 The linkpred Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line harness: stats, spectrum, eval, sweep, time, null.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "linkpred/bench/config.hpp"
#include "linkpred/bench/registry.hpp"
#include "linkpred/bench/report.hpp"
#include "linkpred/bench/runner.hpp"
#include "linkpred/stats.hpp"

namespace fs = std::filesystem;
using namespace linkpred;
using namespace linkpred::bench;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

// Configuration problems are usage errors even when they surface as parse
// errors of the config file.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::vector<std::string> datasets;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::string> test_fraction;
  std::optional<std::string> out;
  std::optional<std::size_t> workers;
  std::optional<std::string> auc_mode;
  std::optional<std::size_t> auc_n;
  std::optional<std::string> registry;
  std::optional<std::uint32_t> dense_cap;
  std::vector<std::string> indices;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("-d,--dataset", f.datasets,
                  "Registry name, generator spec (complete:N, star:K, path:N, ring:N, "
                  "er:N:P:SEED, gnm:N:M:SEED) or edge-list path; repeatable");
  app->add_option("-c,--config", f.config, "Experiment config file (key = value)")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", f.seed, "Base seed; run r uses seed + r");
  app->add_option("--runs", f.runs, "Independent splits per cell");
  app->add_option("--test-fraction", f.test_fraction, "Test fraction(s): 0.1 or 0.1,0.2 or 0.1:0.1:0.5");
  app->add_option("-o,--out", f.out, "Output directory");
  app->add_option("-j,--workers", f.workers, "Worker threads");
  app->add_option("--auc-mode", f.auc_mode, "exact or sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  app->add_option("--auc-n", f.auc_n, "Samples for --auc-mode sampled");
  app->add_option("--registry", f.registry, "Dataset manifest: lines 'name path [N M]'");
  app->add_option("--dense-cap", f.dense_cap, "Largest N for dense (Katz, LO) evaluation");
  app->add_option("-i,--index", f.indices,
                  "Index spec, e.g. CLE or 'CLE_STAR alpha=0:0.05:1'; repeatable");
}

ExperimentConfig build_config(const CommonFlags& f) {
  try {
    ExperimentConfig c;
    if (!f.config.empty()) {
      std::ifstream in(f.config);
      if (!in) throw UsageError("cannot open config '" + f.config + "'");
      c = parse_config(in);
    }
    if (!f.datasets.empty()) c.datasets = f.datasets;
    if (f.seed) c.seed = *f.seed;
    if (f.runs) c.runs = *f.runs;
    if (f.test_fraction) c.test_fractions = parse_grid(*f.test_fraction);
    if (f.out) c.out = *f.out;
    if (f.workers) c.workers = *f.workers;
    if (f.auc_mode) c.auc_mode = parse_auc_mode(*f.auc_mode);
    if (f.auc_n) c.auc_samples = *f.auc_n;
    if (f.registry) c.registry = *f.registry;
    if (f.dense_cap) c.dense_cap = *f.dense_cap;
    if (!f.indices.empty()) {
      c.indices.clear();
      for (const auto& spec : f.indices)
        for (auto& g : parse_index_spec(spec)) c.indices.push_back(std::move(g));
    }
    c.validate();
    return c;
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(std::string("configuration: ") + e.what());
  }
}

Registry open_registry(const ExperimentConfig& c) {
  return c.registry.empty() ? Registry{} : Registry::load(c.registry);
}

std::ofstream open_output(const ExperimentConfig& c, const std::string& file) {
  fs::create_directories(c.out);
  const fs::path p = fs::path(c.out) / file;
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

// Writes to both stdout and the named file in the output directory.
template <class Emit>
void emit_twice(const ExperimentConfig& c, const std::string& file, Emit&& emit) {
  emit(std::cout);
  auto out = open_output(c, file);
  emit(out);
}

int cmd_stats(const ExperimentConfig& c) {
  const auto registry = open_registry(c);
  const auto datasets = load_datasets(c, registry);
  std::ostringstream csv;
  write_stats_header(csv);
  for (const auto& d : datasets) {
    const StatsRecord s = network_stats(d.graph, unsigned(c.workers));
    write_stats_row(csv, d.name, s, eigengap(d.graph));
  }
  emit_twice(c, "stats.csv", [&](std::ostream& o) { o << csv.str(); });
  return kOk;
}

int cmd_spectrum(const ExperimentConfig& c) {
  const auto registry = open_registry(c);
  const auto datasets = load_datasets(c, registry);
  for (const auto& d : datasets) {
    const auto rows = spectrum_rows(d.graph, c.spectrum_k);
    const std::string file =
        datasets.size() == 1 ? "spectrum.csv" : "spectrum_" + d.name + ".csv";
    emit_twice(c, file, [&](std::ostream& o) { write_spectrum_csv(o, rows); });
    for (const auto& r : rows)
      if (!r.r) std::cerr << "note: " << d.name << " d=" << r.d << ": degenerate correlation\n";
  }
  return kOk;
}

void write_report(const ExperimentConfig& c, const EvalReport& report) {
  {
    auto out = open_output(c, "runs.csv");
    write_runs_csv(out, report.runs);
  }
  {
    auto out = open_output(c, "aggregate.csv");
    write_aggregates_csv(out, report.aggregates);
  }
  if (!report.failures.empty()) {
    auto out = open_output(c, "failures.csv");
    write_failures_csv(out, report.failures);
  }
  auto out = open_output(c, "report.json");
  out << to_json(report).dump(2) << '\n';
}

void print_summary(const EvalReport& report) {
  std::cout << std::left << std::setw(14) << "network" << std::setw(28) << "index"
            << std::setw(8) << "frac" << std::setw(6) << "runs" << std::setw(18) << "AUC"
            << "AUPR\n";
  std::cout << std::fixed << std::setprecision(4);
  for (const auto& a : report.aggregates) {
    std::ostringstream auc, aupr;
    auc << std::fixed << std::setprecision(4) << a.auc_mean << " +- " << a.auc_std;
    aupr << std::fixed << std::setprecision(4) << a.aupr_mean << " +- " << a.aupr_std;
    std::cout << std::setw(14) << a.network << std::setw(28) << a.label() << std::setw(8)
              << a.test_fraction << std::setw(6) << a.runs << std::setw(18) << auc.str()
              << aupr.str() << '\n';
  }
  for (const auto& w : winning_rates(report.aggregates)) {
    std::cout << "winning rate (test fraction " << w.test_fraction << ")\n";
    for (std::size_t i = 0; i < w.labels.size(); ++i) {
      std::ostringstream auc, aupr;
      auc << std::fixed << std::setprecision(2) << 100 * w.auc[i] << '%';
      aupr << std::fixed << std::setprecision(2) << 100 * w.aupr[i] << '%';
      std::cout << "  " << std::setw(26) << w.labels[i] << " AUC " << std::setw(9) << auc.str()
                << " AUPR " << aupr.str() << '\n';
    }
  }
  std::cout.unsetf(std::ios::floatfield);
}

int report_exit(const EvalReport& report) {
  if (report.runs.empty() && !report.failures.empty()) {
    std::cerr << "error: every run failed\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_eval(const ExperimentConfig& c) {
  const auto registry = open_registry(c);
  const auto datasets = load_datasets(c, registry);
  const EvalReport report = run_experiment(datasets, c.index_configs(), c, &std::cerr);
  write_report(c, report);
  print_summary(report);
  return report_exit(report);
}

int cmd_sweep(const ExperimentConfig& c) {
  const auto registry = open_registry(c);
  const auto datasets = load_datasets(c, registry);
  const EvalReport report = run_experiment(datasets, sweep_configs(c), c, &std::cerr);
  write_report(c, report);
  const auto optima = select_optima(report.aggregates);
  {
    auto out = open_output(c, "optima.csv");
    write_optima_csv(out, optima);
  }
  {
    auto out = open_output(c, "delta.csv");
    out << "network,delta\n";
    for (const auto& d : datasets) {
      out << d.name << ',' << bench::detail::format_double(eigengap(d.graph)) << '\n';
    }
  }
  print_summary(report);
  write_optima_csv(std::cout, optima);
  return report_exit(report);
}

int cmd_time(const ExperimentConfig& c) {
  const auto points = run_timing(c.index_configs(), c, &std::cerr);
  const auto slopes = timing_slopes(points);
  {
    auto out = open_output(c, "timing.csv");
    write_timing_csv(out, points);
  }
  emit_twice(c, "slopes.csv", [&](std::ostream& o) { write_slopes_csv(o, slopes); });
  return kOk;
}

int cmd_null(const ExperimentConfig& c) {
  const auto registry = open_registry(c);
  const auto datasets = load_datasets(c, registry);
  std::ostringstream csv;
  csv << "network,model,seed,accepted,rejected,n,m,density,avg_degree,avg_clustering,"
         "avg_path_length,assortativity\n";
  auto row = [&](const std::string& name, const char* model, std::uint64_t seed,
                 std::size_t accepted, std::size_t rejected, const StatsRecord& s) {
    auto num = [](double v) {
      return std::isfinite(v) ? bench::detail::format_double(v) : std::string("nan");
    };
    csv << name << ',' << model << ',' << seed << ',' << accepted << ',' << rejected << ','
        << s.n_nodes << ',' << s.n_edges << ',' << num(s.density) << ',' << num(s.avg_degree)
        << ',' << num(s.avg_clustering) << ',' << num(s.avg_path_length) << ','
        << num(s.assortativity) << '\n';
  };
  for (const auto& d : datasets) {
    row(d.name, "original", 0, 0, 0, network_stats(d.graph, unsigned(c.workers)));
    const std::size_t swaps = c.swaps ? c.swaps : 10 * d.graph.m();
    for (std::size_t r = 0; r < c.runs; ++r) {
      const auto rw = rewire_degree_preserving_counted(d.graph, swaps, c.seed + r);
      row(d.name, "rewired", c.seed + r, rw.accepted, rw.rejected,
          network_stats(rw.graph, unsigned(c.workers)));
    }
  }
  emit_twice(c, "null.csv", [&](std::ostream& o) { o << csv.str(); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link prediction by similarity indices: statistics, spectra, evaluation, "
               "sweeps, timing and null models"};
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    CommonFlags flags;
    int (*run)(const ExperimentConfig&);
  };
  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](const char* name, const char* help, int (*run)(const ExperimentConfig&)) {
    auto cmd = std::make_unique<Command>();
    cmd->app = app.add_subcommand(name, help);
    cmd->run = run;
    add_common(cmd->app, cmd->flags);
    commands.push_back(std::move(cmd));
    return commands.back().get();
  };
  add("stats", "Structural statistics and eigengap per dataset", cmd_stats);
  Command* spectrum = add("spectrum", "Leading eigenpairs and CN correlation per component", cmd_spectrum);
  add("eval", "Repeated random splits: AUC, AUPR, winning rate", cmd_eval);
  add("sweep", "Parameter grids with optimum selection", cmd_sweep);
  Command* timing = add("time", "Evaluation time on synthetic graphs of growing size", cmd_time);
  Command* null = add("null", "Statistics of degree-preserving rewired graphs", cmd_null);

  std::optional<std::size_t> k, swaps, repeats;
  std::optional<std::string> sizes;
  std::optional<double> mean_degree;
  spectrum->app->add_option("-k", k, "Eigenpairs to report (<= 32)");
  null->app->add_option("--swaps", swaps, "Attempted swaps (default 10 M)");
  timing->app->add_option("--sizes", sizes, "Node counts, e.g. 500,1000,2000,4000");
  timing->app->add_option("--mean-degree", mean_degree, "Mean degree of the synthetic graphs");
  timing->app->add_option("--repeats", repeats, "Timed repetitions per point (median kept)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  for (const auto& cmd : commands) {
    if (!cmd->app->parsed()) continue;
    try {
      ExperimentConfig c = build_config(cmd->flags);
      try {
        if (k) c.spectrum_k = *k;
        if (swaps) c.swaps = *swaps;
        if (mean_degree) c.mean_degree = *mean_degree;
        if (repeats) c.timing_repeats = *repeats;
        if (sizes) {
          c.sizes.clear();
          for (double v : parse_grid(*sizes)) c.sizes.push_back(std::uint32_t(v));
        }
        c.validate();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      return cmd->run(c);
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const InvalidArgument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const ResourceError& e) {
      std::cerr << "error: " << e.what() << " (raise --dense-cap)\n";
      return kUsage;
    } catch (const DataError& e) {
      std::cerr << "data error: " << e.what() << '\n';
      return kData;
    } catch (const NumericalError& e) {
      std::cerr << "numerical error: " << e.what() << '\n';
      return kNumerical;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kData;
    }
  }
  return kUsage;
}
