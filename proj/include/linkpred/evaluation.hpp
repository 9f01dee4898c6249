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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "linkpred/error.hpp"
#include "linkpred/graph.hpp"
#include "linkpred/similarity.hpp"

namespace linkpred {

struct EdgeSplit {
  std::vector<Edge> train;
  std::vector<Edge> test;
  std::uint64_t seed = 0;
  double test_fraction = 0;
};

// round-half-up(fraction * m)
inline std::size_t test_edge_count(std::size_t m, double fraction) {
  const double t = fraction * double(m);
  return std::size_t(std::floor(t + 0.5 + 1e-9 * std::max(1.0, t)));
}

/**
 * Uniform random division of the edges: round(test_fraction * M) of them go
 * to the test set. The training graph is not required to stay connected.
 */
inline EdgeSplit split_edges(const Graph& g, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0 && test_fraction < 1)) {
    throw InvalidArgument("test fraction must lie strictly between 0 and 1");
  }
  const std::size_t m = g.m();
  const std::size_t p = test_edge_count(m, test_fraction);
  if (p >= m) throw InvalidArgument("split leaves no training edges");
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  EdgeSplit s;
  s.seed = seed;
  s.test_fraction = test_fraction;
  std::vector<std::size_t> test_ids(order.begin(), order.begin() + std::ptrdiff_t(p));
  std::vector<std::size_t> train_ids(order.begin() + std::ptrdiff_t(p), order.end());
  std::sort(test_ids.begin(), test_ids.end());
  std::sort(train_ids.begin(), train_ids.end());
  for (auto i : test_ids) s.test.push_back(g.edges()[i]);
  for (auto i : train_ids) s.train.push_back(g.edges()[i]);
  return s;
}

// Candidate pairs for prediction: every x < y that is not a training edge.
inline std::vector<NodePair> candidate_pairs(const Graph& train) {
  std::vector<NodePair> out;
  for (node_t x = 0; x < train.n(); ++x)
    for (node_t y = x + 1; y < train.n(); ++y)
      if (!train.has_edge(x, y)) out.push_back({x, y});
  return out;
}

/**
 * Scores are compared after rounding to 36 significant bits, so values that
 * are equal in exact arithmetic but were summed in a different order still
 * tie. Every metric below ranks by this key.
 */
inline double rank_key(double s) {
  if (s == 0.0 || !std::isfinite(s)) return s;
  int e = 0;
  const double m = std::frexp(s, &e);
  return std::ldexp(std::nearbyint(std::ldexp(m, 36)), e - 36);
}

namespace detail {

inline ScoreTable keyed(const ScoreTable& t) {
  ScoreTable k = t;
  for (double& s : k.scores) s = rank_key(s);
  return k;
}

inline std::vector<char> positive_mask(const ScoreTable& t, std::span<const Edge> test) {
  if (test.empty()) throw InvalidArgument("empty test set");
  std::unordered_set<std::uint64_t> keys;
  for (const Edge& e : test) keys.insert(edge_key(e.u, e.v));
  std::vector<char> positive(t.size(), 0);
  std::size_t found = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t.scores[i])) throw NumericalError("non-finite score");
    if (keys.count(edge_key(t.pairs[i].x, t.pairs[i].y))) {
      positive[i] = 1;
      ++found;
    }
  }
  if (found != keys.size()) throw InvalidArgument("score table is missing test edges");
  if (found == t.size()) throw InvalidArgument("no non-edges to compare against");
  return positive;
}

}  // namespace detail

/**
 * Exact AUC by midranks: (sum of positive ranks - P(P+1)/2) / (P Q). This is
 * the value the pairwise sampling estimator converges to, with ties
 * credited one half.
 */
inline double auc_exact(const ScoreTable& table, std::span<const Edge> test) {
  const ScoreTable t = detail::keyed(table);
  const auto positive = detail::positive_mask(t, test);
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return t.scores[a] < t.scores[b]; });
  double rank_sum = 0;
  std::size_t p = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && t.scores[order[j]] == t.scores[order[i]]) ++j;
    const double midrank = 0.5 * double(i + 1 + j);
    for (std::size_t r = i; r < j; ++r) {
      if (positive[order[r]]) {
        rank_sum += midrank;
        ++p;
      }
    }
    i = j;
  }
  const double q = double(t.size() - p);
  return (rank_sum - double(p) * double(p + 1) / 2) / (double(p) * q);
}

// The literal estimator: n independent (missing link, non-edge) draws.
inline double auc_sampled(const ScoreTable& table, std::span<const Edge> test, std::size_t n,
                          std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample count must be positive");
  const ScoreTable t = detail::keyed(table);
  const auto positive = detail::positive_mask(t, test);
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < t.size(); ++i) (positive[i] ? pos : neg).push_back(t.scores[i]);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_pos(0, pos.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_neg(0, neg.size() - 1);
  double hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = pos[pick_pos(rng)];
    const double b = neg[pick_neg(rng)];
    if (a > b) hits += 1.0;
    else if (a == b) hits += 0.5;
  }
  return hits / double(n);
}

/**
 * Non-interpolated area under the precision-recall curve over the full
 * ranking (descending score, ties by pair): the mean over test edges of the
 * precision L_r / L at the rank L where each is recovered.
 */
inline double aupr(const ScoreTable& table, std::span<const Edge> test) {
  const ScoreTable t = detail::keyed(table);
  const auto positive = detail::positive_mask(t, test);
  std::size_t total_pos = 0;
  for (char c : positive) total_pos += std::size_t(c);
  double area = 0;
  std::size_t hits = 0, rank = 0;
  for (std::size_t i : ranking_order(t)) {
    ++rank;
    if (positive[i]) {
      ++hits;
      area += double(hits) / double(rank);
    }
  }
  return area / double(total_pos);
}

/**
 * Exact AUC and AUPR without materializing the ranking: the (few) positive
 * scores are registered first, then negatives are streamed one at a time.
 */
class RankingAccumulator {
 public:
  struct Scored {
    double score;
    NodePair pair;
  };

  explicit RankingAccumulator(std::vector<Scored> positives) : positives_(std::move(positives)) {
    if (positives_.empty()) throw InvalidArgument("empty test set");
    for (auto& p : positives_) {
      if (!std::isfinite(p.score)) throw NumericalError("non-finite score");
      p.score = rank_key(p.score);
    }
    std::sort(positives_.begin(), positives_.end(), ahead);
    ascending_.reserve(positives_.size());
    for (auto it = positives_.rbegin(); it != positives_.rend(); ++it) ascending_.push_back(it->score);
    preceding_.assign(positives_.size() + 1, 0);
  }

  void add_negative(double score, NodePair pair) {
    if (!std::isfinite(score)) throw NumericalError("non-finite score");
    score = rank_key(score);
    ++negatives_;
    const auto lo = std::lower_bound(ascending_.begin(), ascending_.end(), score);
    const auto hi = std::upper_bound(lo, ascending_.end(), score);
    above_ += double(ascending_.end() - hi);
    ties_ += double(hi - lo);
    // Positives ranked after this negative: all keys greater than its key.
    const Scored key{score, pair};
    const auto at = std::upper_bound(positives_.begin(), positives_.end(), key, ahead);
    ++preceding_[std::size_t(at - positives_.begin())];
  }

  std::size_t positives() const noexcept { return positives_.size(); }
  std::size_t negatives() const noexcept { return negatives_; }

  double auc() const {
    if (negatives_ == 0) throw InvalidArgument("no non-edges to compare against");
    return (above_ + 0.5 * ties_) / (double(positives_.size()) * double(negatives_));
  }

  double aupr() const {
    double area = 0;
    std::size_t before = 0;
    for (std::size_t j = 0; j < positives_.size(); ++j) {
      before += preceding_[j];
      area += double(j + 1) / double(j + 1 + before);
    }
    return area / double(positives_.size());
  }

 private:
  static bool ahead(const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.pair < b.pair;
  }

  std::vector<Scored> positives_;   // ranking order
  std::vector<double> ascending_;   // positive scores, ascending
  std::vector<std::size_t> preceding_;
  std::size_t negatives_ = 0;
  double above_ = 0;
  double ties_ = 0;
};

/**
 * Winning rate per index. `table[net][idx]` holds one metric; on each
 * network the indices within `tie_tol` of the best share one point.
 */
inline std::vector<double> winning_rate(const std::vector<std::vector<double>>& table,
                                        double tie_tol = 1e-4) {
  if (table.empty()) throw InvalidArgument("winning rate needs at least one network");
  const std::size_t k = table.front().size();
  if (k == 0) throw InvalidArgument("winning rate needs at least one index");
  std::vector<double> score(k, 0.0);
  for (const auto& row : table) {
    if (row.size() != k) throw InvalidArgument("incomplete result table");
    for (double v : row)
      if (!std::isfinite(v)) throw InvalidArgument("incomplete result table");
    const double best = *std::max_element(row.begin(), row.end());
    std::size_t m = 0;
    for (double v : row) m += (best - v <= tie_tol) ? 1 : 0;
    for (std::size_t i = 0; i < k; ++i)
      if (best - row[i] <= tie_tol) score[i] += 1.0 / double(m);
  }
  for (double& s : score) s /= double(table.size());
  return score;
}

struct MannWhitney {
  double u = 0;  // #{a_i > b_j} + 0.5 #{a_i == b_j}
  double p = 1;  // two-sided
};

// Normal approximation with tie-corrected variance and continuity correction.
inline MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("Mann-Whitney needs non-empty samples");
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  std::vector<std::pair<double, int>> all;
  all.reserve(n);
  for (double v : a) all.push_back({v, 0});
  for (double v : b) all.push_back({v, 1});
  std::sort(all.begin(), all.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  double rank_a = 0, tie_term = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && all[j].first == all[i].first) ++j;
    const double midrank = 0.5 * double(i + 1 + j);
    const double t = double(j - i);
    tie_term += t * t * t - t;
    for (std::size_t r = i; r < j; ++r)
      if (all[r].second == 0) rank_a += midrank;
    i = j;
  }
  MannWhitney out;
  out.u = rank_a - double(na) * double(na + 1) / 2;
  const double mean = double(na) * double(nb) / 2;
  const double var = double(na) * double(nb) / 12 *
                     (double(n + 1) - tie_term / (double(n) * double(n - 1)));
  if (!(var > 0)) {
    out.p = 1.0;
    return out;
  }
  const double z = std::max(0.0, std::abs(out.u - mean) - 0.5) / std::sqrt(var);
  out.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return out;
}

// ---------------------------------------------------------------------------
// One split, scored and evaluated.

enum class AucMode { Exact, Sampled };

struct EvalOptions {
  AucMode auc_mode = AucMode::Exact;
  std::size_t auc_samples = 100000;
  ScorerOptions scorer;
};

struct SplitResult {
  double auc = 0;
  double aupr = 0;
  double seconds = 0;
};

/**
 * Scores every pair outside the training edges with `config` on the
 * training graph and evaluates against the test edges. Rows are computed
 * one at a time; memory stays O(N + |test|).
 */
inline SplitResult evaluate_split(const Graph& g, const EdgeSplit& split, const IndexConfig& config,
                                  const EvalOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  if (split.test.empty()) throw InvalidArgument("empty test set");
  const Graph train = g.with_edges(split.train);
  const Scorer scorer(train, config, options.scorer);
  const node_t n = g.n();

  std::vector<std::vector<node_t>> test_rows(n);
  for (const Edge& e : split.test) test_rows[e.u].push_back(e.v);
  for (auto& r : test_rows) std::sort(r.begin(), r.end());

  RowWorkspace ws = scorer.workspace();
  std::vector<double> row(n);
  std::vector<RankingAccumulator::Scored> positives;
  for (node_t x = 0; x < n; ++x) {
    if (test_rows[x].empty()) continue;
    scorer.row(x, row, ws);
    for (node_t y : test_rows[x]) positives.push_back({row[y], {x, y}});
  }
  RankingAccumulator acc(positives);
  for (node_t x = 0; x < n; ++x) {
    scorer.row(x, row, ws);
    const auto& tests = test_rows[x];
    std::size_t t = 0;
    for (node_t y = x + 1; y < n; ++y) {
      while (t < tests.size() && tests[t] < y) ++t;
      if (t < tests.size() && tests[t] == y) continue;
      if (train.has_edge(x, y)) continue;
      acc.add_negative(row[y], {x, y});
    }
  }

  SplitResult r;
  r.aupr = acc.aupr();
  if (options.auc_mode == AucMode::Exact) {
    r.auc = acc.auc();
  } else {
    if (options.auc_samples == 0) throw InvalidArgument("sample count must be positive");
    if (2 * g.m() == std::size_t(n) * (n - 1)) {
      throw InvalidArgument("no non-edges to compare against");
    }
    // Draws use the per-pair formulas on both sides so that ties compare
    // values produced the same way.
    std::mt19937_64 rng(split.seed);
    std::uniform_int_distribution<std::size_t> pick_pos(0, split.test.size() - 1);
    std::uniform_int_distribution<node_t> pick_node(0, n - 1);
    double hits = 0;
    for (std::size_t i = 0; i < options.auc_samples; ++i) {
      const Edge& e = split.test[pick_pos(rng)];
      node_t a, b;
      do {
        a = pick_node(rng);
        b = pick_node(rng);
      } while (a == b || g.has_edge(a, b));
      const double sp = rank_key(scorer.pair(e.u, e.v));
      const double sn = rank_key(scorer.pair(std::min(a, b), std::max(a, b)));
      if (sp > sn) hits += 1.0;
      else if (sp == sn) hits += 0.5;
    }
    r.auc = hits / double(options.auc_samples);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace linkpred
