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
#include <cassert>
#include <cstdint>
#include <istream>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "linkpred/error.hpp"

namespace linkpred {

using node_t = std::uint32_t;

// Undirected edge, always stored with u < v.
struct Edge {
  node_t u = 0;
  node_t v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(node_t a, node_t b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

inline std::uint64_t edge_key(node_t a, node_t b) {
  const Edge e = make_edge(a, b);
  return (std::uint64_t{e.u} << 32) | e.v;
}

/**
 * Immutable simple undirected graph over node ids 0..n-1.
 *
 * Adjacency is kept in compressed sparse row form with strictly increasing
 * column indices per row, so neighbor sets can be intersected by merging.
 * Each node carries the string label it had in the source file.
 */
class Graph {
 public:
  Graph() = default;

  // Builds a graph from arbitrary pairs: self-loops are dropped and
  // duplicate/reciprocal pairs merged. Missing labels default to the id.
  static Graph from_edges(node_t n, std::span<const Edge> pairs,
                          std::vector<std::string> labels = {}) {
    Graph g;
    g.n_ = n;
    g.edges_.reserve(pairs.size());
    for (const Edge& p : pairs) {
      if (p.u >= n || p.v >= n) {
        throw InvalidArgument("edge endpoint out of range");
      }
      if (p.u == p.v) continue;
      g.edges_.push_back(make_edge(p.u, p.v));
    }
    std::sort(g.edges_.begin(), g.edges_.end());
    g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()),
                   g.edges_.end());

    g.offsets_.assign(std::size_t{n} + 1, 0);
    for (const Edge& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.columns_.resize(g.offsets_[n]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // With edges sorted by (u, v), filling every row's smaller neighbors
    // first and larger neighbors second leaves each row sorted.
    for (const Edge& e : g.edges_) g.columns_[cursor[e.v]++] = e.u;
    for (const Edge& e : g.edges_) g.columns_[cursor[e.u]++] = e.v;

    if (labels.empty()) {
      labels.reserve(n);
      for (node_t x = 0; x < n; ++x) labels.push_back(std::to_string(x));
    } else if (labels.size() != n) {
      throw InvalidArgument("label count does not match node count");
    }
    g.labels_ = std::make_shared<const std::vector<std::string>>(
        std::move(labels));
    assert(g.invariants_hold());
    return g;
  }

  // Same node set and labels, different edge set (used for training graphs
  // and rewired copies).
  Graph with_edges(std::span<const Edge> pairs) const {
    Graph g = from_edges(n_, pairs, {});
    g.labels_ = labels_;
    return g;
  }

  node_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }

  std::size_t degree(node_t x) const { return offsets_[x + 1] - offsets_[x]; }

  std::span<const node_t> neighbors(node_t x) const {
    return {columns_.data() + offsets_[x], degree(x)};
  }

  std::span<const Edge> edges() const noexcept { return edges_; }

  bool has_edge(node_t x, node_t y) const {
    auto row = neighbors(x);
    return std::binary_search(row.begin(), row.end(), y);
  }

  const std::string& label(node_t x) const { return (*labels_)[x]; }
  std::span<const std::string> labels() const { return *labels_; }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(n_);
    for (node_t x = 0; x < n_; ++x) d[x] = degree(x);
    return d;
  }

  // Symmetric adjacency, sorted rows, degree/row agreement, no self-loops.
  bool invariants_hold() const {
    if (offsets_.size() != std::size_t{n_} + 1) return false;
    if (offsets_[n_] != 2 * edges_.size()) return false;
    for (node_t x = 0; x < n_; ++x) {
      auto row = neighbors(x);
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] >= n_ || row[i] == x) return false;
        if (i > 0 && row[i - 1] >= row[i]) return false;
        if (!has_edge(row[i], x)) return false;
      }
    }
    return true;
  }

 private:
  node_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<node_t> columns_;
  std::shared_ptr<const std::vector<std::string>> labels_ =
      std::make_shared<const std::vector<std::string>>();
};

struct ParseOptions {
  bool ignore_weights = true;
  bool ignore_direction = true;
};

/**
 * Reads a whitespace-separated edge list. Lines starting with '#' or '%'
 * are comments, tokens after the first two are ignored (weights,
 * timestamps). Node labels map to ids in order of first appearance.
 */
inline Graph parse_edge_list(std::istream& in, ParseOptions options = {}) {
  if (!options.ignore_weights || !options.ignore_direction) {
    throw InvalidArgument(
        "only undirected unweighted graphs are supported; weights and "
        "directions must be ignored");
  }
  std::unordered_map<std::string, node_t> ids;
  std::vector<std::string> labels;
  std::vector<Edge> pairs;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.try_emplace(label, node_t(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == '%') continue;
    std::istringstream tokens(line);
    std::string a, b;
    tokens >> a >> b;
    if (b.empty()) throw ParseError(line_no, "expected at least two tokens");
    node_t x = intern(a);
    node_t y = intern(b);
    pairs.push_back({x, y});
  }
  const auto n = node_t(labels.size());
  Graph g = Graph::from_edges(n, pairs, std::move(labels));
  if (g.m() == 0) throw DataError("no edges");
  return g;
}

inline Graph parse_edge_list(std::string_view text, ParseOptions options = {}) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in, options);
}

}  // namespace linkpred
