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

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>
#include <vector>

#include "linkpred/bench/config.hpp"
#include "linkpred/bench/registry.hpp"
#include "linkpred/bench/report.hpp"
#include "linkpred/evaluation.hpp"
#include "linkpred/spectral.hpp"
#include "linkpred/stats.hpp"

namespace linkpred::bench {

/**
 * Calls f(i) for i in [0, count) on up to `workers` threads. Results must be
 * written to slot i by f; exceptions are rethrown after all threads finish,
 * lowest index first.
 */
template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& f) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::vector<std::exception_ptr> errors(count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
          try {
            f(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Dataset {
  std::string name;
  Graph graph;
};

inline std::vector<Dataset> load_datasets(const ExperimentConfig& c, const Registry& registry) {
  if (c.datasets.empty()) throw InvalidArgument("no datasets configured");
  std::vector<Dataset> out;
  for (const auto& name : c.datasets) out.push_back({name, registry.resolve(name)});
  return out;
}

inline EvalOptions eval_options(const ExperimentConfig& c) {
  EvalOptions o;
  o.auc_mode = c.auc_mode;
  o.auc_samples = c.auc_samples;
  o.scorer.dense_cap = c.dense_cap;
  return o;
}

/**
 * Every (dataset, index config, test fraction, run) unit; run r of a cell
 * uses seed base + r for its split and its AUC draws, so the same seed gives
 * the same split for every index. Library errors inside a unit are recorded
 * as failures and the unit is skipped. A dense index on a graph above the
 * dense cap is a configuration error and throws ResourceError up front.
 */
inline EvalReport run_experiment(const std::vector<Dataset>& datasets,
                                 const std::vector<IndexConfig>& configs,
                                 const ExperimentConfig& c, std::ostream* log = nullptr) {
  for (const auto& d : datasets)
    for (const auto& cfg : configs)
      if (is_dense(cfg.id) && d.graph.n() > c.dense_cap) {
        throw ResourceError(d.name + ": " + cfg.name() + " needs dense evaluation with N = " +
                            std::to_string(d.graph.n()) + " above the cap " +
                            std::to_string(c.dense_cap));
      }
  struct Unit {
    std::size_t dataset, config;
    double fraction;
    std::uint64_t seed;
  };
  std::vector<Unit> units;
  for (std::size_t d = 0; d < datasets.size(); ++d)
    for (std::size_t k = 0; k < configs.size(); ++k)
      for (double f : c.test_fractions)
        for (std::size_t r = 0; r < c.runs; ++r) units.push_back({d, k, f, c.seed + r});

  struct Outcome {
    bool ok = false;
    SplitResult result;
    std::string error;
  };
  std::vector<Outcome> outcomes(units.size());
  const EvalOptions options = eval_options(c);
  parallel_for(units.size(), c.workers, [&](std::size_t i) {
    const Unit& u = units[i];
    const Graph& g = datasets[u.dataset].graph;
    try {
      const EdgeSplit split = split_edges(g, u.fraction, u.seed);
      outcomes[i].result = evaluate_split(g, split, configs[u.config], options);
      outcomes[i].ok = true;
    } catch (const Error& e) {
      outcomes[i].error = e.what();
    }
  });

  EvalReport report;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const Unit& u = units[i];
    const IndexConfig& cfg = configs[u.config];
    const std::string& net = datasets[u.dataset].name;
    const std::string idx(to_string(cfg.id));
    if (outcomes[i].ok) {
      const auto& r = outcomes[i].result;
      report.runs.push_back({net, idx, cfg.params(), u.fraction, u.seed, r.auc, r.aupr, r.seconds});
    } else {
      report.failures.push_back({net, idx, cfg.params(), u.fraction, u.seed, outcomes[i].error});
      if (log) {
        *log << "warning: " << net << " " << cfg.name() << " seed " << u.seed
             << " failed: " << outcomes[i].error << '\n';
      }
    }
  }
  report.aggregates = aggregate(report.runs, report.failures);
  if (log && !report.failures.empty()) {
    *log << "warning: " << report.failures.size() << " of " << units.size()
         << " runs failed and were excluded\n";
  }
  return report;
}

// Grid sweep: the expanded configurations plus, when CLE_STAR is swept,
// CLE and SCF_CN reference cells (its alpha = delta and alpha = 1 points).
inline std::vector<IndexConfig> sweep_configs(const ExperimentConfig& c) {
  auto configs = c.index_configs();
  const bool star = std::any_of(configs.begin(), configs.end(),
                                [](const IndexConfig& k) { return k.id == IndexId::CLE_STAR; });
  if (star) {
    for (IndexId ref : {IndexId::CLE, IndexId::SCF_CN}) {
      const auto cfg = IndexConfig::plain(ref);
      if (std::find(configs.begin(), configs.end(), cfg) == configs.end()) configs.push_back(cfg);
    }
  }
  return configs;
}

// Best parameter value per (network, index, fraction, metric).
struct Optimum {
  std::string network;
  std::string index;
  double test_fraction = 0;
  std::string metric;
  std::string params;
  double value = 0;
};

inline std::vector<Optimum> select_optima(const std::vector<Aggregate>& aggs) {
  std::vector<Optimum> out;
  auto consider = [&](const Aggregate& a, const char* metric, double v) {
    if (a.params.empty() || !std::isfinite(v)) return;
    for (auto& o : out) {
      if (o.network == a.network && o.index == a.index && o.test_fraction == a.test_fraction &&
          o.metric == metric) {
        if (v > o.value) {
          o.params = a.params;
          o.value = v;
        }
        return;
      }
    }
    out.push_back({a.network, a.index, a.test_fraction, metric, a.params, v});
  };
  for (const auto& a : aggs) {
    consider(a, "auc", a.auc_mean);
    consider(a, "aupr", a.aupr_mean);
  }
  return out;
}

inline void write_optima_csv(std::ostream& out, const std::vector<Optimum>& optima) {
  out << "network,index,test_fraction,metric,params,value\n";
  for (const auto& o : optima) {
    out << o.network << ',' << o.index << ',' << detail::format_double(o.test_fraction) << ','
        << o.metric << ',' << o.params << ',' << detail::format_double(o.value) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Timing on synthetic graphs.

struct TimingPoint {
  std::string index;
  std::string params;
  node_t n = 0;
  std::size_t m = 0;
  double seconds = 0;  // median over repeats
};

struct TimingSlope {
  std::string index;
  std::string params;
  double slope = 0;  // least-squares slope of log(seconds) against log(N)
};

inline double loglog_slope(const std::vector<double>& n, const std::vector<double>& t) {
  if (n.size() < 2) return std::nan("");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    mx += std::log(n[i]);
    my += std::log(t[i]);
  }
  mx /= double(n.size());
  my /= double(n.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    sxy += (std::log(n[i]) - mx) * (std::log(t[i]) - my);
    sxx += (std::log(n[i]) - mx) * (std::log(n[i]) - mx);
  }
  return sxy / sxx;
}

/**
 * Times one full split evaluation (training graph, scoring every candidate
 * pair, metrics) per index on G(N, p) graphs with p = mean_degree / (N-1).
 * Runs sequentially so that timings do not compete for cores.
 */
inline std::vector<TimingPoint> run_timing(const std::vector<IndexConfig>& configs,
                                           const ExperimentConfig& c, std::ostream* log = nullptr) {
  std::vector<TimingPoint> points;
  const EvalOptions options = eval_options(c);
  for (node_t n : c.sizes) {
    const Graph g = gen::erdos_renyi(n, c.mean_degree / double(n - 1), c.seed);
    const EdgeSplit split = split_edges(g, c.test_fractions.front(), c.seed);
    for (const auto& cfg : configs) {
      std::vector<double> t;
      for (std::size_t r = 0; r < c.timing_repeats; ++r) {
        t.push_back(evaluate_split(g, split, cfg, options).seconds);
      }
      std::sort(t.begin(), t.end());
      points.push_back({std::string(to_string(cfg.id)), cfg.params(), n, g.m(), t[t.size() / 2]});
      if (log) *log << "time " << cfg.name() << " N=" << n << ": " << t[t.size() / 2] << " s\n";
    }
  }
  return points;
}

inline std::vector<TimingSlope> timing_slopes(const std::vector<TimingPoint>& points) {
  std::vector<TimingSlope> out;
  for (const auto& p : points) {
    bool seen = false;
    for (const auto& s : out) seen = seen || (s.index == p.index && s.params == p.params);
    if (seen) continue;
    std::vector<double> n, t;
    for (const auto& q : points) {
      if (q.index == p.index && q.params == p.params) {
        n.push_back(double(q.n));
        t.push_back(std::max(q.seconds, 1e-9));
      }
    }
    out.push_back({p.index, p.params, loglog_slope(n, t)});
  }
  return out;
}

inline void write_timing_csv(std::ostream& out, const std::vector<TimingPoint>& points) {
  out << "index,params,n,m,seconds\n";
  for (const auto& p : points) {
    out << p.index << ',' << p.params << ',' << p.n << ',' << p.m << ','
        << detail::format_double(p.seconds) << '\n';
  }
}

inline void write_slopes_csv(std::ostream& out, const std::vector<TimingSlope>& slopes) {
  out << "index,params,loglog_slope\n";
  for (const auto& s : slopes)
    out << s.index << ',' << s.params << ',' << detail::format_double(s.slope) << '\n';
}

// ---------------------------------------------------------------------------
// Structure, spectrum and null model.

inline void write_stats_header(std::ostream& out) {
  out << "network,n,m,density,avg_degree,avg_clustering,avg_path_length,assortativity,delta,"
         "lcc_size\n";
}

inline void write_stats_row(std::ostream& out, const std::string& name, const StatsRecord& s,
                            double delta) {
  auto num = [](double v) { return std::isfinite(v) ? detail::format_double(v) : std::string("nan"); };
  out << name << ',' << s.n_nodes << ',' << s.n_edges << ',' << num(s.density) << ','
      << num(s.avg_degree) << ',' << num(s.avg_clustering) << ',' << num(s.avg_path_length) << ','
      << num(s.assortativity) << ',' << num(delta) << ',' << s.lcc_size << '\n';
}

// lambda_2^2 / lambda_1^2 of the whole graph, NaN when undefined.
inline double eigengap(const Graph& g) {
  if (g.n() < 2 || g.m() == 0) return std::nan("");
  return top_eigenpairs(g, 2).delta;
}

struct SpectrumRow {
  std::size_t d = 0;
  double lambda = 0;
  double lambda_sq = 0;
  std::optional<double> r;  // nullopt: zero variance on one side
};

inline std::vector<SpectrumRow> spectrum_rows(const Graph& g, std::size_t k) {
  k = std::min<std::size_t>(k, g.n());
  const SpectralSummary s = top_eigenpairs(g, k);
  const auto r = pearson_cn_vs_components(g, s);
  std::vector<SpectrumRow> rows;
  for (std::size_t d = 1; d <= k; ++d) {
    rows.push_back({d, s.lambda(d), s.lambda(d) * s.lambda(d), r[d - 1]});
  }
  return rows;
}

inline void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows) {
  out << "d,lambda,lambda_sq,r,degenerate\n";
  for (const auto& row : rows) {
    out << row.d << ',' << detail::format_double(row.lambda) << ','
        << detail::format_double(row.lambda_sq) << ','
        << (row.r ? detail::format_double(*row.r) : std::string()) << ','
        << (row.r ? 0 : 1) << '\n';
  }
}

}  // namespace linkpred::bench
