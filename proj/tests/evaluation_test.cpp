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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "linkpred/evaluation.hpp"
#include "linkpred/generators.hpp"
#include "oracle.hpp"

namespace linkpred {
namespace {

// Scores for every candidate pair of a split under the pair route.
struct Instance {
  Graph g;
  EdgeSplit split;
  Graph train;
  ScoreTable table;
};

Instance make_instance(std::uint32_t n, double p, std::uint64_t seed, IndexConfig c) {
  Graph g = oracle::random_graph(n, p, seed);
  EdgeSplit split = split_edges(g, 0.1, seed);
  Graph train = g.with_edges(split.train);
  Scorer scorer(train, c);
  ScoreTable t = scorer.score(candidate_pairs(train));
  return {std::move(g), std::move(split), std::move(train), std::move(t)};
}

ScoreTable table_of(std::vector<NodePair> pairs, std::vector<double> scores) {
  ScoreTable t;
  t.config = IndexConfig::plain(IndexId::CN);
  t.pairs = std::move(pairs);
  t.scores = std::move(scores);
  return t;
}

// (n1 + 0.5 n2) / n over every (positive, negative) combination.
double brute_auc(const ScoreTable& t, std::span<const Edge> test) {
  std::set<NodePair> pos;
  for (const Edge& e : test) pos.insert({e.u, e.v});
  double hits = 0, total = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!pos.count(t.pairs[i])) continue;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (pos.count(t.pairs[j])) continue;
      total += 1;
      if (t.scores[i] > t.scores[j]) hits += 1;
      else if (t.scores[i] == t.scores[j]) hits += 0.5;
    }
  }
  return hits / total;
}

// Walk the curve: recompute precision and recall at every cutoff L.
double brute_aupr(const ScoreTable& t, std::span<const Edge> test) {
  std::set<NodePair> pos;
  for (const Edge& e : test) pos.insert({e.u, e.v});
  std::vector<std::pair<double, NodePair>> ranked;
  for (std::size_t i = 0; i < t.size(); ++i) ranked.push_back({-t.scores[i], t.pairs[i]});
  std::sort(ranked.begin(), ranked.end());
  double area = 0, prev_recall = 0;
  for (std::size_t L = 1; L <= ranked.size(); ++L) {
    std::size_t lr = 0;
    for (std::size_t i = 0; i < L; ++i) lr += pos.count(ranked[i].second);
    const double precision = double(lr) / double(L);
    const double recall = double(lr) / double(pos.size());
    area += precision * (recall - prev_recall);
    prev_recall = recall;
  }
  return area;
}

TEST(Split, RoundingAndPartition) {
  EXPECT_EQ(test_edge_count(118, 0.1), 12u);
  EXPECT_EQ(test_edge_count(5, 0.5), 3u);
  EXPECT_EQ(test_edge_count(10, 0.25), 3u);
  Graph g = oracle::random_graph(40, 0.1, 2);
  for (double f : {0.1, 0.5, 0.9}) {
    EdgeSplit s = split_edges(g, f, 7);
    EXPECT_EQ(s.test.size(), test_edge_count(g.m(), f));
    std::vector<Edge> both = s.train;
    both.insert(both.end(), s.test.begin(), s.test.end());
    std::sort(both.begin(), both.end());
    EXPECT_TRUE(std::equal(both.begin(), both.end(), g.edges().begin(), g.edges().end()));
    EXPECT_TRUE(std::adjacent_find(both.begin(), both.end()) == both.end());
  }
}

TEST(Split, DeterministicPerSeed) {
  Graph g = oracle::random_graph(40, 0.1, 2);
  EXPECT_EQ(split_edges(g, 0.1, 3).test, split_edges(g, 0.1, 3).test);
  EXPECT_NE(split_edges(g, 0.1, 3).test, split_edges(g, 0.1, 4).test);
}

TEST(Split, Errors) {
  Graph g = gen::complete(4);
  EXPECT_THROW(split_edges(g, 0.0, 1), InvalidArgument);
  EXPECT_THROW(split_edges(g, 1.0, 1), InvalidArgument);
  EXPECT_THROW(split_edges(g, std::nan(""), 1), InvalidArgument);
  EXPECT_THROW(split_edges(gen::path(2), 0.5, 1), InvalidArgument);
}

TEST(Auc, TrivialRankings) {
  auto pairs = std::vector<NodePair>{{0, 1}, {0, 2}, {0, 3}, {1, 2}};
  std::vector<Edge> test{{0, 1}, {0, 2}};
  ScoreTable perfect = table_of(pairs, {3, 2, 1, 0});
  EXPECT_EQ(auc_exact(perfect, test), 1.0);
  EXPECT_EQ(auc_sampled(perfect, test, 1000, 1), 1.0);
  ScoreTable flat = table_of(pairs, {1, 1, 1, 1});
  EXPECT_EQ(auc_exact(flat, test), 0.5);
  EXPECT_EQ(auc_sampled(flat, test, 1000, 1), 0.5);
}

TEST(Auc, Errors) {
  auto pairs = std::vector<NodePair>{{0, 1}, {0, 2}};
  ScoreTable t = table_of(pairs, {1, 2});
  EXPECT_THROW(auc_exact(t, std::vector<Edge>{}), InvalidArgument);
  EXPECT_THROW(auc_exact(t, std::vector<Edge>{{0, 1}, {0, 2}}), InvalidArgument);
  EXPECT_THROW(auc_exact(t, std::vector<Edge>{{1, 2}}), InvalidArgument);
  EXPECT_THROW(auc_sampled(t, std::vector<Edge>{{0, 1}}, 0, 1), InvalidArgument);
}

TEST(Auc, MatchesExhaustiveComparison) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance in = make_instance(12, 0.35, seed, IndexConfig::plain(IndexId::CN));
    EXPECT_NEAR(auc_exact(in.table, in.split.test), brute_auc(in.table, in.split.test), 1e-12);
  }
}

TEST(Auc, SampledConvergesToExact) {
  Instance in = make_instance(200, 0.05, 1, IndexConfig::plain(IndexId::RA));
  const double exact = auc_exact(in.table, in.split.test);
  double dev = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const double a = auc_sampled(in.table, in.split.test, 100000, s);
    EXPECT_LT(std::abs(a - exact), 0.01);
    dev += std::abs(a - exact);
  }
  EXPECT_LT(dev / 20, 0.005);
  EXPECT_EQ(auc_sampled(in.table, in.split.test, 5000, 9),
            auc_sampled(in.table, in.split.test, 5000, 9));
}

TEST(Auc, InvariantUnderIncreasingTransform) {
  Instance in = make_instance(30, 0.2, 3, IndexConfig::plain(IndexId::AA));
  ScoreTable warped = in.table;
  for (double& s : warped.scores) s = std::exp(2 * s) - 5;
  EXPECT_NEAR(auc_exact(in.table, in.split.test), auc_exact(warped, in.split.test), 1e-15);
}

TEST(Aupr, TrivialRankings) {
  auto pairs = std::vector<NodePair>{{0, 1}, {0, 2}, {0, 3}, {1, 2}};
  EXPECT_EQ(aupr(table_of(pairs, {4, 3, 2, 1}), std::vector<Edge>{{0, 1}, {0, 2}}), 1.0);
  EXPECT_EQ(aupr(table_of(pairs, {4, 3, 2, 1}), std::vector<Edge>{{0, 2}}), 0.5);
  // Ties fall back to pair order: (0,1) precedes (0,2).
  EXPECT_EQ(aupr(table_of(pairs, {1, 1, 0, 0}), std::vector<Edge>{{0, 2}}), 0.5);
}

TEST(Aupr, MatchesCurveWalk) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance in = make_instance(12, 0.35, seed, IndexConfig::plain(IndexId::CN));
    EXPECT_NEAR(aupr(in.table, in.split.test), brute_aupr(in.table, in.split.test), 1e-12);
  }
}

// Expected average precision of a uniformly random ranking of N candidates
// holding P positives: position r is positive with probability P/N and is
// then preceded by (r-1)(P-1)/(N-1) positives on average.
double random_ranking_aupr(double n, double p) {
  double h = 0;
  for (double r = 1; r <= n; ++r) h += 1 / r;
  return (h + (p - 1) / (n - 1) * (n - h)) / n;
}

double mean_random_aupr(const Instance& in, int seeds) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  double mean = 0;
  for (int s = 0; s < seeds; ++s) {
    ScoreTable t = in.table;
    for (double& v : t.scores) v = u(rng);
    const double a = aupr(t, in.split.test);
    EXPECT_LE(a, 1.0);
    mean += a / seeds;
  }
  return mean;
}

TEST(Aupr, RandomScoresMatchExpectedValue) {
  Instance in = make_instance(30, 0.2, 5, IndexConfig::plain(IndexId::CN));
  const double expected =
      random_ranking_aupr(double(in.table.size()), double(in.split.test.size()));
  EXPECT_NEAR(mean_random_aupr(in, 2000), expected, 0.05 * expected);
}

TEST(Aupr, RandomScoresApproachPrevalence) {
  // The gap to the prevalence P / N is about H_N / N, small once P >> H_N.
  Graph g = oracle::random_graph(40, 0.5, 5);
  EdgeSplit split = split_edges(g, 0.5, 5);
  Graph train = g.with_edges(split.train);
  Instance in{g, split, train, Scorer(train, IndexConfig::plain(IndexId::CN)).score(candidate_pairs(train))};
  const double prevalence = double(in.split.test.size()) / double(in.table.size());
  EXPECT_NEAR(mean_random_aupr(in, 50), prevalence, 0.2 * prevalence);
}

TEST(Metrics, IndependentOfInputOrder) {
  Instance in = make_instance(25, 0.2, 8, IndexConfig::plain(IndexId::CN));
  ScoreTable shuffled = in.table;
  std::vector<std::size_t> perm(shuffled.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(2));
  for (std::size_t i = 0; i < perm.size(); ++i) {
    shuffled.pairs[i] = in.table.pairs[perm[i]];
    shuffled.scores[i] = in.table.scores[perm[i]];
  }
  EXPECT_EQ(auc_exact(in.table, in.split.test), auc_exact(shuffled, in.split.test));
  EXPECT_EQ(aupr(in.table, in.split.test), aupr(shuffled, in.split.test));
}

TEST(RankingAccumulator, AgreesWithTableMetricsUnderHeavyTies) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> score(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<NodePair> pairs;
    std::vector<double> scores;
    for (node_t x = 0; x < 8; ++x)
      for (node_t y = x + 1; y < 8; ++y) {
        pairs.push_back({x, y});
        scores.push_back(score(rng));
      }
    std::vector<Edge> test;
    std::vector<RankingAccumulator::Scored> pos;
    for (std::size_t i = 0; i < pairs.size(); i += 5) {
      test.push_back({pairs[i].x, pairs[i].y});
      pos.push_back({scores[i], pairs[i]});
    }
    RankingAccumulator acc(pos);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (i % 5) acc.add_negative(scores[i], pairs[i]);
    ScoreTable t = table_of(pairs, scores);
    EXPECT_NEAR(acc.auc(), auc_exact(t, test), 1e-15);
    EXPECT_NEAR(acc.aupr(), aupr(t, test), 1e-15);
  }
}

TEST(EvaluateSplit, StreamingMatchesTableRouteForEveryIndex) {
  Graph g = oracle::random_graph(40, 0.12, 21);
  EdgeSplit split = split_edges(g, 0.1, 21);
  Graph train = g.with_edges(split.train);
  const double rho = spectral_radius(train);
  for (IndexId id : kAllIndices) {
    IndexConfig c = IndexConfig::plain(IndexId::CN);
    if (uses_beta(id)) c = IndexConfig::katz(0.5 / rho);
    else if (uses_epsilon(id)) c = IndexConfig::lp(0.01);
    else if (uses_alpha(id)) c = IndexConfig::with_alpha(id, 0.3);
    else c = IndexConfig::plain(id);
    SCOPED_TRACE(c.name());
    SplitResult r = evaluate_split(g, split, c);
    ScoreTable t = Scorer(train, c).score(candidate_pairs(train));
    EXPECT_NEAR(r.auc, auc_exact(t, split.test), 1e-9);
    EXPECT_NEAR(r.aupr, aupr(t, split.test), 1e-9);
    EXPECT_GE(r.auc, 0.0);
    EXPECT_LE(r.auc, 1.0);
  }
}

TEST(EvaluateSplit, SampledModeIsSeededBySplit) {
  Graph g = oracle::random_graph(60, 0.1, 3);
  EdgeSplit split = split_edges(g, 0.1, 3);
  EvalOptions o{.auc_mode = AucMode::Sampled, .auc_samples = 20000};
  SplitResult a = evaluate_split(g, split, IndexConfig::plain(IndexId::RA), o);
  SplitResult b = evaluate_split(g, split, IndexConfig::plain(IndexId::RA), o);
  EXPECT_EQ(a.auc, b.auc);
  SplitResult exact = evaluate_split(g, split, IndexConfig::plain(IndexId::RA));
  EXPECT_NEAR(a.auc, exact.auc, 0.02);
  EXPECT_EQ(a.aupr, exact.aupr);
}

TEST(EvaluateSplit, CompleteGraphHasNoNegatives) {
  Graph k5 = gen::complete(5);
  EdgeSplit split = split_edges(k5, 0.2, 1);
  EXPECT_THROW(evaluate_split(k5, split, IndexConfig::plain(IndexId::CN)), InvalidArgument);
  EXPECT_THROW(evaluate_split(k5, split, IndexConfig::plain(IndexId::CN),
                              {.auc_mode = AucMode::Sampled}),
               InvalidArgument);
}

TEST(WinningRate, Examples) {
  auto r = winning_rate(std::vector<std::vector<double>>(18, {0.9, 0.8, 0.7}));
  EXPECT_EQ(r, (std::vector<double>{1.0, 0.0, 0.0}));
  r = winning_rate({{0.9, 0.9, 0.1}, {0.9, 0.8, 0.1}});
  EXPECT_NEAR(r[0], 0.75, 1e-15);
  EXPECT_NEAR(r[1], 0.25, 1e-15);
  EXPECT_NEAR(r[0] + r[1] + r[2], 1.0, 1e-15);
  // Differences inside the reporting precision count as ties.
  r = winning_rate({{0.90004, 0.9, 0.1}});
  EXPECT_NEAR(r[0], 0.5, 1e-15);
  EXPECT_THROW(winning_rate({}), InvalidArgument);
  EXPECT_THROW(winning_rate({{0.5, 0.4}, {0.5}}), InvalidArgument);
  EXPECT_THROW(winning_rate({{0.5, std::nan("")}}), InvalidArgument);
}

// Exact null distribution of U for continuous data by counting
// arrangements: c(m, n, u) = c(m-1, n, u-n) + c(m, n-1, u).
double exact_two_sided_p(std::size_t m, std::size_t n, double u) {
  std::vector<std::vector<std::vector<double>>> c(
      m + 1, std::vector<std::vector<double>>(n + 1, std::vector<double>(m * n + 1, 0.0)));
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = 0; j <= n; ++j) {
      if (i == 0 || j == 0) {
        c[i][j][0] = 1;
        continue;
      }
      for (std::size_t v = 0; v <= i * j; ++v) {
        c[i][j][v] = (v >= j ? c[i - 1][j][v - j] : 0.0) + c[i][j - 1][v];
      }
    }
  double total = 0, tail = 0;
  const double mean = double(m * n) / 2;
  for (std::size_t v = 0; v <= m * n; ++v) {
    total += c[m][n][v];
    if (std::abs(double(v) - mean) >= std::abs(u - mean) - 1e-9) tail += c[m][n][v];
  }
  return tail / total;
}

TEST(MannWhitney, Examples) {
  std::vector<double> a{1, 2, 3}, b{10, 20, 30};
  MannWhitney r = mann_whitney_u(a, b);
  EXPECT_EQ(r.u, 0.0);
  EXPECT_EQ(mann_whitney_u(b, a).u, 9.0);
  r = mann_whitney_u(a, a);
  EXPECT_EQ(r.u, 4.5);
  EXPECT_EQ(r.p, 1.0);
  std::vector<double> same(5, 0.7);
  EXPECT_EQ(mann_whitney_u(same, same).p, 1.0);
  EXPECT_THROW(mann_whitney_u(a, std::vector<double>{}), InvalidArgument);
}

TEST(MannWhitney, MatchesExactPermutationDistribution) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> a(18), b(18);
    const double shift = 0.1 * trial;
    for (double& v : a) v = z(rng) + shift;
    for (double& v : b) v = z(rng);
    MannWhitney r = mann_whitney_u(a, b);
    EXPECT_NEAR(r.p, exact_two_sided_p(18, 18, r.u), 0.02) << "trial " << trial;
  }
}

}  // namespace
}  // namespace linkpred
