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

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "linkpred/bench/config.hpp"
#include "linkpred/evaluation.hpp"

namespace linkpred::bench {

// One (network, index, split seed) evaluation.
struct RunRecord {
  std::string network;
  std::string index;
  std::string params;
  double test_fraction = 0;
  std::uint64_t seed = 0;
  double auc = 0;
  double aupr = 0;
  double seconds = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct RunFailure {
  std::string network;
  std::string index;
  std::string params;
  double test_fraction = 0;
  std::uint64_t seed = 0;
  std::string error;
};

// Mean and sample standard deviation over the successful runs of one cell.
struct Aggregate {
  std::string network;
  std::string index;
  std::string params;
  double test_fraction = 0;
  std::size_t runs = 0;
  std::size_t failed = 0;
  double auc_mean = std::nan("");
  double auc_std = std::nan("");
  double aupr_mean = std::nan("");
  double aupr_std = std::nan("");

  std::string label() const { return params.empty() ? index : index + "(" + params + ")"; }
};

struct EvalReport {
  std::vector<RunRecord> runs;          // successful runs, in unit order
  std::vector<RunFailure> failures;
  std::vector<Aggregate> aggregates;    // one per (network, index, params, fraction)
};

namespace detail {

// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_double_field(const std::string& s, std::size_t line) {
  try {
    return to_double(s);
  } catch (const InvalidArgument& e) {
    throw ParseError(line, e.what());
  }
}

inline std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {std::nan(""), std::nan("")};
  double mean = 0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  if (v.size() == 1) return {mean, 0.0};
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / double(v.size() - 1))};
}

}  // namespace detail

inline constexpr const char* kRunCsvHeader =
    "network,index,params,test_fraction,seed,auc,aupr,seconds";

inline void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
  out << kRunCsvHeader << '\n';
  for (const auto& r : runs) {
    out << r.network << ',' << r.index << ',' << r.params << ','
        << detail::format_double(r.test_fraction) << ',' << r.seed << ','
        << detail::format_double(r.auc) << ',' << detail::format_double(r.aupr) << ','
        << detail::format_double(r.seconds) << '\n';
  }
}

inline std::vector<RunRecord> read_runs_csv(std::istream& in) {
  std::vector<RunRecord> runs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kRunCsvHeader) throw ParseError(1, "unexpected header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 8) throw ParseError(line_no, "expected 8 fields");
    RunRecord r;
    r.network = f[0];
    r.index = f[1];
    r.params = f[2];
    r.test_fraction = detail::parse_double_field(f[3], line_no);
    try {
      r.seed = detail::to_count(f[4]);
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
    r.auc = detail::parse_double_field(f[5], line_no);
    r.aupr = detail::parse_double_field(f[6], line_no);
    r.seconds = detail::parse_double_field(f[7], line_no);
    runs.push_back(std::move(r));
  }
  return runs;
}

inline void write_failures_csv(std::ostream& out, const std::vector<RunFailure>& failures) {
  out << "network,index,params,test_fraction,seed,error\n";
  for (const auto& f : failures) {
    std::string msg = f.error;
    for (char& c : msg)
      if (c == ',' || c == '\n') c = ';';
    out << f.network << ',' << f.index << ',' << f.params << ','
        << detail::format_double(f.test_fraction) << ',' << f.seed << ',' << msg << '\n';
  }
}

/**
 * Groups runs by (network, index, params, fraction) in order of first
 * appearance; failures only add to the `failed` count of their cell.
 */
inline std::vector<Aggregate> aggregate(const std::vector<RunRecord>& runs,
                                        const std::vector<RunFailure>& failures = {}) {
  using Key = std::tuple<std::string, std::string, std::string, double>;
  std::map<Key, std::size_t> slot;
  std::vector<Aggregate> out;
  std::vector<std::vector<double>> aucs, auprs;
  auto cell = [&](const std::string& net, const std::string& idx, const std::string& params,
                  double f) -> std::size_t {
    auto [it, inserted] = slot.try_emplace(Key{net, idx, params, f}, out.size());
    if (inserted) {
      Aggregate a;
      a.network = net;
      a.index = idx;
      a.params = params;
      a.test_fraction = f;
      out.push_back(a);
      aucs.emplace_back();
      auprs.emplace_back();
    }
    return it->second;
  };
  for (const auto& r : runs) {
    const auto i = cell(r.network, r.index, r.params, r.test_fraction);
    aucs[i].push_back(r.auc);
    auprs[i].push_back(r.aupr);
  }
  for (const auto& f : failures) ++out[cell(f.network, f.index, f.params, f.test_fraction)].failed;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].runs = aucs[i].size();
    std::tie(out[i].auc_mean, out[i].auc_std) = detail::mean_std(aucs[i]);
    std::tie(out[i].aupr_mean, out[i].aupr_std) = detail::mean_std(auprs[i]);
  }
  return out;
}

inline void write_aggregates_csv(std::ostream& out, const std::vector<Aggregate>& aggs) {
  out << "network,index,params,test_fraction,runs,failed,auc_mean,auc_std,aupr_mean,aupr_std\n";
  for (const auto& a : aggs) {
    out << a.network << ',' << a.index << ',' << a.params << ','
        << detail::format_double(a.test_fraction) << ',' << a.runs << ',' << a.failed << ','
        << detail::format_double(a.auc_mean) << ',' << detail::format_double(a.auc_std) << ','
        << detail::format_double(a.aupr_mean) << ',' << detail::format_double(a.aupr_std) << '\n';
  }
}

// Winning rate per index label for one metric and test fraction.
struct WinningRates {
  double test_fraction = 0;
  std::vector<std::string> labels;
  std::vector<double> auc;
  std::vector<double> aupr;
};

/**
 * Winning rates across networks, one block per test fraction. Cells whose
 * runs all failed make the comparison incomplete; that block is skipped.
 */
inline std::vector<WinningRates> winning_rates(const std::vector<Aggregate>& aggs,
                                               double tie_tol = 1e-4) {
  std::vector<double> fractions;
  for (const auto& a : aggs)
    if (std::find(fractions.begin(), fractions.end(), a.test_fraction) == fractions.end())
      fractions.push_back(a.test_fraction);
  std::vector<WinningRates> out;
  for (double f : fractions) {
    std::vector<std::string> nets, labels;
    for (const auto& a : aggs) {
      if (a.test_fraction != f) continue;
      if (std::find(nets.begin(), nets.end(), a.network) == nets.end()) nets.push_back(a.network);
      if (std::find(labels.begin(), labels.end(), a.label()) == labels.end())
        labels.push_back(a.label());
    }
    std::vector<std::vector<double>> auc(nets.size(), std::vector<double>(labels.size(), std::nan(""))),
        aupr = auc;
    for (const auto& a : aggs) {
      if (a.test_fraction != f) continue;
      const auto i = std::size_t(std::find(nets.begin(), nets.end(), a.network) - nets.begin());
      const auto j = std::size_t(std::find(labels.begin(), labels.end(), a.label()) - labels.begin());
      auc[i][j] = a.auc_mean;
      aupr[i][j] = a.aupr_mean;
    }
    try {
      out.push_back({f, labels, winning_rate(auc, tie_tol), winning_rate(aupr, tie_tol)});
    } catch (const InvalidArgument&) {
      continue;
    }
  }
  return out;
}

inline nlohmann::ordered_json to_json(const EvalReport& report, double tie_tol = 1e-4) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json cells = ordered_json::array();
  for (const auto& a : report.aggregates) {
    auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
    cells.push_back({{"network", a.network},
                     {"index", a.index},
                     {"params", a.params},
                     {"test_fraction", a.test_fraction},
                     {"runs", a.runs},
                     {"failed", a.failed},
                     {"auc", {{"mean", num(a.auc_mean)}, {"std", num(a.auc_std)}}},
                     {"aupr", {{"mean", num(a.aupr_mean)}, {"std", num(a.aupr_std)}}}});
  }
  j["aggregates"] = cells;
  ordered_json rates = ordered_json::array();
  for (const auto& w : winning_rates(report.aggregates, tie_tol)) {
    ordered_json auc, aupr;
    for (std::size_t i = 0; i < w.labels.size(); ++i) {
      auc[w.labels[i]] = w.auc[i];
      aupr[w.labels[i]] = w.aupr[i];
    }
    rates.push_back({{"test_fraction", w.test_fraction}, {"auc", auc}, {"aupr", aupr}});
  }
  j["winning_rate"] = rates;
  j["tie_tolerance"] = tie_tol;
  return j;
}

}  // namespace linkpred::bench
