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

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "linkpred/error.hpp"
#include "linkpred/evaluation.hpp"
#include "linkpred/similarity.hpp"

namespace linkpred::bench {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    out.push_back(trim(s.substr(start, at == std::string_view::npos ? s.npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

inline double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

inline std::uint64_t to_count(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw InvalidArgument("not a non-negative integer: '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw InvalidArgument("integer out of range: '" + s + "'");
  }
}

}  // namespace detail

/**
 * A grid of values: "0.5", "0,0.25,1" or "start:step:stop" (inclusive,
 * values start + i * step). Forms may be mixed with commas.
 */
inline std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> values;
  for (const std::string& item : detail::split(text, ',')) {
    if (item.empty()) throw InvalidArgument("empty grid entry in '" + std::string(text) + "'");
    const auto parts = detail::split(item, ':');
    if (parts.size() == 1) {
      values.push_back(detail::to_double(parts[0]));
      continue;
    }
    if (parts.size() != 3) throw InvalidArgument("range must be start:step:stop, got '" + item + "'");
    const double a = detail::to_double(parts[0]);
    const double step = detail::to_double(parts[1]);
    const double b = detail::to_double(parts[2]);
    if (!(step > 0) || !(b >= a)) throw InvalidArgument("range needs step > 0 and stop >= start");
    const double span = (b - a) / step;
    if (span > 1e6) throw InvalidArgument("range has too many points");
    const auto count = std::size_t(std::floor(span + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) values.push_back(a + double(i) * step);
  }
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidArgument("grid values must be finite");
  return values;
}

// One index with the values of its single parameter (empty if it has none).
struct IndexGrid {
  IndexId id = IndexId::CN;
  std::vector<double> values;

  std::vector<IndexConfig> expand() const {
    if (values.empty()) return {IndexConfig::plain(id)};
    std::vector<IndexConfig> out;
    for (double v : values) {
      IndexConfig c{id, {}, {}, {}};
      if (uses_alpha(id)) c.alpha = v;
      else if (uses_beta(id)) c.beta = v;
      else c.epsilon = v;
      out.push_back(IndexConfig::checked(c));
    }
    return out;
  }

  friend bool operator==(const IndexGrid&, const IndexGrid&) = default;
};

inline const char* parameter_name(IndexId id) {
  if (uses_alpha(id)) return "alpha";
  if (uses_beta(id)) return "beta";
  if (uses_epsilon(id)) return "epsilon";
  return nullptr;
}

/**
 * "CN", "CN, RA, SCF_RA" (parameter-free only) or "CLE_STAR alpha=0:0.05:1".
 */
inline std::vector<IndexGrid> parse_index_spec(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string names, param;
  in >> names;
  std::string rest;
  std::getline(in, rest);
  rest = detail::trim(rest);
  // Allow "CN, RA" with spaces after commas.
  while (!rest.empty() && names.back() == ',') {
    std::istringstream more(rest);
    std::string next;
    more >> next;
    names += next;
    rest.clear();
    std::getline(more, rest);
    rest = detail::trim(rest);
  }
  std::vector<IndexGrid> out;
  for (const std::string& name : detail::split(names, ',')) {
    auto id = index_from_string(name);
    if (!id) throw InvalidArgument("unknown index '" + name + "'");
    out.push_back({*id, {}});
  }
  if (rest.empty()) {
    for (const auto& g : out) {
      if (parameter_name(g.id)) {
        throw InvalidArgument(std::string(to_string(g.id)) + " needs " + parameter_name(g.id) +
                              "=<grid>");
      }
    }
    return out;
  }
  if (out.size() != 1) throw InvalidArgument("a parameter grid applies to exactly one index");
  const auto eq = rest.find('=');
  if (eq == std::string::npos) throw InvalidArgument("expected name=grid after index name");
  const std::string key = detail::trim(rest.substr(0, eq));
  const char* expected = parameter_name(out[0].id);
  if (!expected || key != expected) {
    throw InvalidArgument(std::string(to_string(out[0].id)) + " does not take parameter '" + key +
                          "'");
  }
  out[0].values = parse_grid(rest.substr(eq + 1));
  if (out[0].values.empty()) throw InvalidArgument("empty parameter grid");
  out[0].expand();  // validates every value
  return out;
}

// The nine parameter-free indices of the main comparison.
inline std::vector<IndexGrid> default_indices() {
  return {{IndexId::CLE, {}},    {IndexId::SCF_CN, {}}, {IndexId::SCF_AA, {}},
          {IndexId::SCF_RA, {}}, {IndexId::SCF_CRA, {}}, {IndexId::CN, {}},
          {IndexId::AA, {}},     {IndexId::RA, {}},     {IndexId::CRA, {}}};
}

struct ExperimentConfig {
  std::vector<std::string> datasets;
  std::vector<IndexGrid> indices = default_indices();
  std::vector<double> test_fractions{0.1};
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  AucMode auc_mode = AucMode::Exact;
  std::size_t auc_samples = 100000;
  node_t dense_cap = kDefaultDenseCap;
  std::size_t workers = 1;
  std::string out = "results";
  std::string registry;
  // Timing on synthetic G(n, p) graphs with the given mean degree.
  std::vector<std::uint32_t> sizes{500, 1000, 2000, 4000};
  double mean_degree = 10;
  std::size_t timing_repeats = 3;
  // Null model: attempted swaps, 0 means 10 * M.
  std::size_t swaps = 0;
  std::size_t spectrum_k = 10;

  void validate() const {
    if (runs < 1) throw InvalidArgument("runs must be >= 1");
    if (indices.empty()) throw InvalidArgument("no indices configured");
    for (const auto& g : indices) {
      if (parameter_name(g.id) && g.values.empty()) {
        throw InvalidArgument(std::string(to_string(g.id)) + " needs a non-empty grid");
      }
      g.expand();
    }
    if (test_fractions.empty()) throw InvalidArgument("no test fractions configured");
    for (double f : test_fractions)
      if (!(f > 0 && f < 1)) throw InvalidArgument("test fraction must lie in (0, 1)");
    if (auc_samples < 1) throw InvalidArgument("auc_n must be >= 1");
    if (workers < 1) throw InvalidArgument("workers must be >= 1");
    if (timing_repeats < 1) throw InvalidArgument("timing_repeats must be >= 1");
    if (!(mean_degree > 0)) throw InvalidArgument("mean_degree must be positive");
    for (auto n : sizes)
      if (n < 2 || mean_degree >= n - 1) throw InvalidArgument("timing sizes must exceed mean_degree + 1");
    if (spectrum_k < 1 || spectrum_k > 32) throw InvalidArgument("spectrum_k must lie in [1, 32]");
  }

  std::vector<IndexConfig> index_configs() const {
    std::vector<IndexConfig> out;
    for (const auto& g : indices)
      for (auto& c : g.expand()) out.push_back(std::move(c));
    return out;
  }
};

inline AucMode parse_auc_mode(std::string_view s) {
  if (s == "exact") return AucMode::Exact;
  if (s == "sampled") return AucMode::Sampled;
  throw InvalidArgument("auc mode must be 'exact' or 'sampled', got '" + std::string(s) + "'");
}

/**
 * Reads "key = value" lines; '#' starts a comment. `index` lines accumulate
 * and replace the default index list; every other key overwrites.
 */
inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {}) {
  ExperimentConfig c = std::move(base);
  bool indices_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    try {
      if (key == "datasets") {
        c.datasets.clear();
        for (auto& d : detail::split(value, ','))
          if (!d.empty()) c.datasets.push_back(d);
      } else if (key == "index") {
        if (!indices_seen) c.indices.clear();
        indices_seen = true;
        for (auto& g : parse_index_spec(value)) c.indices.push_back(std::move(g));
      } else if (key == "test_fraction") {
        c.test_fractions = parse_grid(value);
      } else if (key == "runs") {
        c.runs = detail::to_count(value);
      } else if (key == "seed") {
        c.seed = detail::to_count(value);
      } else if (key == "auc_mode") {
        c.auc_mode = parse_auc_mode(value);
      } else if (key == "auc_n") {
        c.auc_samples = detail::to_count(value);
      } else if (key == "dense_cap") {
        c.dense_cap = node_t(detail::to_count(value));
      } else if (key == "workers") {
        c.workers = detail::to_count(value);
      } else if (key == "out") {
        c.out = value;
      } else if (key == "registry") {
        c.registry = value;
      } else if (key == "sizes") {
        c.sizes.clear();
        for (double v : parse_grid(value)) {
          if (v < 0 || v != std::floor(v)) throw InvalidArgument("sizes must be integers");
          c.sizes.push_back(std::uint32_t(v));
        }
      } else if (key == "mean_degree") {
        c.mean_degree = detail::to_double(value);
      } else if (key == "timing_repeats") {
        c.timing_repeats = detail::to_count(value);
      } else if (key == "swaps") {
        c.swaps = detail::to_count(value);
      } else if (key == "spectrum_k") {
        c.spectrum_k = detail::to_count(value);
      } else {
        throw InvalidArgument("unknown key '" + key + "'");
      }
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return c;
}

}  // namespace linkpred::bench
