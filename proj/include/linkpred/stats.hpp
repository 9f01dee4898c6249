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
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <thread>
#include <unordered_set>
#include <vector>

#include "linkpred/error.hpp"
#include "linkpred/graph.hpp"

namespace linkpred {

struct StatsRecord {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  double density = 0;         // M / (N(N-1)/2)
  double avg_degree = 0;      // 2M / N
  double avg_clustering = 0;  // mean local clustering, degree < 2 counts as 0
  double avg_path_length = 0; // over pairs of the largest connected component
  double assortativity = 0;   // NaN when endpoint degrees have no variance
  std::size_t lcc_size = 0;
};

// Component id per node; ids are assigned in order of smallest member.
inline std::vector<std::size_t> connected_components(const Graph& g,
                                                     std::size_t* count = nullptr) {
  constexpr auto unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(g.n(), unseen);
  std::vector<node_t> stack;
  std::size_t next = 0;
  for (node_t s = 0; s < g.n(); ++s) {
    if (comp[s] != unseen) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      node_t x = stack.back();
      stack.pop_back();
      for (node_t y : g.neighbors(x)) {
        if (comp[y] == unseen) {
          comp[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

inline std::vector<node_t> largest_component(const Graph& g) {
  std::size_t count = 0;
  auto comp = connected_components(g, &count);
  std::vector<std::size_t> sizes(count, 0);
  for (auto c : comp) ++sizes[c];
  const auto best = static_cast<std::size_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<node_t> members;
  for (node_t x = 0; x < g.n(); ++x)
    if (comp[x] == best) members.push_back(x);
  return members;
}

inline double local_clustering(const Graph& g, node_t x,
                               std::vector<char>& mark) {
  auto row = g.neighbors(x);
  const std::size_t k = row.size();
  if (k < 2) return 0.0;
  for (node_t y : row) mark[y] = 1;
  std::size_t links = 0;
  for (node_t y : row)
    for (node_t z : g.neighbors(y))
      if (z > y && mark[z]) ++links;
  for (node_t y : row) mark[y] = 0;
  return 2.0 * double(links) / (double(k) * double(k - 1));
}

inline double average_clustering(const Graph& g) {
  if (g.n() == 0) return 0.0;
  std::vector<char> mark(g.n(), 0);
  double total = 0;
  for (node_t x = 0; x < g.n(); ++x) total += local_clustering(g, x, mark);
  return total / double(g.n());
}

// Newman's degree assortativity; NaN when undefined.
inline double degree_assortativity(const Graph& g) {
  const double m = double(g.m());
  if (m == 0) return std::numeric_limits<double>::quiet_NaN();
  double prod = 0, half_sum = 0, half_sq = 0;
  for (const Edge& e : g.edges()) {
    const double j = double(g.degree(e.u));
    const double k = double(g.degree(e.v));
    prod += j * k;
    half_sum += 0.5 * (j + k);
    half_sq += 0.5 * (j * j + k * k);
  }
  const double mean = half_sum / m;
  const double num = prod / m - mean * mean;
  const double den = half_sq / m - mean * mean;
  if (!(std::abs(den) > 1e-12 * std::max(1.0, half_sq / m))) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return num / den;
}

/**
 * Mean shortest-path length over all ordered node pairs of the largest
 * connected component. Sources are split across `workers` threads, each
 * with its own distance buffer; the per-thread sums are integers so the
 * result does not depend on the worker count.
 */
inline double average_path_length_lcc(const Graph& g, unsigned workers = 1) {
  const auto members = largest_component(g);
  const std::size_t size = members.size();
  if (size < 2) return 0.0;
  workers = std::max(1u, std::min<unsigned>(workers, unsigned(size)));

  auto bfs_sum = [&](std::size_t begin, std::size_t end) {
    std::vector<std::int64_t> dist(g.n(), -1);
    std::vector<node_t> queue;
    queue.reserve(g.n());
    std::uint64_t total = 0;
    for (std::size_t i = begin; i < end; ++i) {
      std::fill(dist.begin(), dist.end(), -1);
      queue.clear();
      node_t s = members[i];
      dist[s] = 0;
      queue.push_back(s);
      for (std::size_t head = 0; head < queue.size(); ++head) {
        node_t x = queue[head];
        for (node_t y : g.neighbors(x)) {
          if (dist[y] < 0) {
            dist[y] = dist[x] + 1;
            total += std::uint64_t(dist[y]);
            queue.push_back(y);
          }
        }
      }
    }
    return total;
  };

  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> pool;
  const std::size_t chunk = (size + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(size, w * chunk);
    const std::size_t end = std::min(size, begin + chunk);
    pool.emplace_back([&, w, begin, end] { partial[w] = bfs_sum(begin, end); });
  }
  for (auto& t : pool) t.join();
  const std::uint64_t total =
      std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
  return double(total) / (double(size) * double(size - 1));
}

inline StatsRecord network_stats(const Graph& g, unsigned workers = 1) {
  if (g.n() < 2) throw InvalidArgument("network_stats needs at least 2 nodes");
  StatsRecord s;
  const double n = g.n();
  const double m = double(g.m());
  s.n_nodes = g.n();
  s.n_edges = g.m();
  s.density = m / (n * (n - 1) / 2);
  s.avg_degree = 2 * m / n;
  s.avg_clustering = average_clustering(g);
  s.avg_path_length = average_path_length_lcc(g, workers);
  s.assortativity = degree_assortativity(g);
  s.lcc_size = largest_component(g).size();
  return s;
}

struct RewireResult {
  Graph graph;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/**
 * Degree-preserving randomization by link crossing: `n_swaps` attempts, each
 * picking two edges (a,b),(c,d) and replacing them with (a,d),(c,b). An
 * attempt is skipped when it would create a self-loop or an existing edge.
 */
inline RewireResult rewire_degree_preserving_counted(const Graph& g,
                                                     std::size_t n_swaps,
                                                     std::uint64_t seed) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  RewireResult out;
  if (edges.size() < 2 || n_swaps == 0) {
    out.graph = g.with_edges(edges);
    out.rejected = edges.size() < 2 ? n_swaps : 0;
    return out;
  }
  std::unordered_set<std::uint64_t> present;
  present.reserve(edges.size() * 2);
  for (const Edge& e : edges) present.insert(edge_key(e.u, e.v));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  std::bernoulli_distribution flip(0.5);
  for (std::size_t attempt = 0; attempt < n_swaps; ++attempt) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    node_t a = edges[i].u, b = edges[i].v;
    node_t c = edges[j].u, d = edges[j].v;
    if (flip(rng)) std::swap(c, d);
    if (i == j || a == d || c == b || present.count(edge_key(a, d)) ||
        present.count(edge_key(c, b))) {
      ++out.rejected;
      continue;
    }
    present.erase(edge_key(a, b));
    present.erase(edge_key(c, d));
    present.insert(edge_key(a, d));
    present.insert(edge_key(c, b));
    edges[i] = make_edge(a, d);
    edges[j] = make_edge(c, b);
    ++out.accepted;
  }
  out.graph = g.with_edges(edges);
  return out;
}

inline Graph rewire_degree_preserving(const Graph& g, std::size_t n_swaps,
                                      std::uint64_t seed) {
  return rewire_degree_preserving_counted(g, n_swaps, seed).graph;
}

}  // namespace linkpred
