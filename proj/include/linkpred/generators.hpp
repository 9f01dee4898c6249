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

#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "linkpred/error.hpp"
#include "linkpred/graph.hpp"

// Toy and synthetic graphs used by tests, the registry and timing runs.
namespace linkpred::gen {

inline Graph complete(node_t n) {
  std::vector<Edge> e;
  for (node_t x = 0; x < n; ++x)
    for (node_t y = x + 1; y < n; ++y) e.push_back({x, y});
  return Graph::from_edges(n, e);
}

// Center 0 plus `leaves` leaves.
inline Graph star(node_t leaves) {
  std::vector<Edge> e;
  for (node_t x = 1; x <= leaves; ++x) e.push_back({0, x});
  return Graph::from_edges(leaves + 1, e);
}

inline Graph path(node_t n) {
  std::vector<Edge> e;
  for (node_t x = 0; x + 1 < n; ++x) e.push_back({x, x + 1});
  return Graph::from_edges(n, e);
}

inline Graph ring(node_t n) {
  if (n < 3) throw InvalidArgument("ring needs at least 3 nodes");
  std::vector<Edge> e;
  for (node_t x = 0; x < n; ++x) e.push_back(make_edge(x, (x + 1) % n));
  return Graph::from_edges(n, e);
}

// G(n, p): every pair independently with probability p.
inline Graph erdos_renyi(node_t n, double p, std::uint64_t seed) {
  if (!(p >= 0 && p <= 1)) throw InvalidArgument("edge probability not in [0,1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (node_t x = 0; x < n; ++x)
    for (node_t y = x + 1; y < n; ++y)
      if (coin(rng)) e.push_back({x, y});
  return Graph::from_edges(n, e);
}

// G(n, m): exactly m distinct edges drawn uniformly.
inline Graph erdos_renyi_gnm(node_t n, std::size_t m, std::uint64_t seed) {
  const double pairs = double(n) * double(n - 1) / 2;
  if (n < 2 || double(m) > pairs) throw InvalidArgument("too many edges for G(n,m)");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<node_t> pick(0, n - 1);
  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> e;
  e.reserve(m);
  while (e.size() < m) {
    node_t a = pick(rng), b = pick(rng);
    if (a == b || !seen.insert(edge_key(a, b)).second) continue;
    e.push_back(make_edge(a, b));
  }
  return Graph::from_edges(n, e);
}

}  // namespace linkpred::gen
