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
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "linkpred/error.hpp"
#include "linkpred/graph.hpp"
#include "linkpred/spectral.hpp"

namespace linkpred {

enum class IndexId {
  CN,
  AA,
  RA,
  CRA,
  PA,
  SCF_CN,
  SCF_AA,
  SCF_RA,
  SCF_CRA,
  TILDE,
  TILDE_STAR,
  CLE,
  CLE_STAR,
  KATZ,
  LP,
  LO,
};

inline constexpr std::array<IndexId, 16> kAllIndices = {
    IndexId::CN,     IndexId::AA,     IndexId::RA,      IndexId::CRA,
    IndexId::PA,     IndexId::SCF_CN, IndexId::SCF_AA,  IndexId::SCF_RA,
    IndexId::SCF_CRA, IndexId::TILDE, IndexId::TILDE_STAR, IndexId::CLE,
    IndexId::CLE_STAR, IndexId::KATZ, IndexId::LP,      IndexId::LO,
};

inline std::string_view to_string(IndexId id) {
  switch (id) {
    case IndexId::CN: return "CN";
    case IndexId::AA: return "AA";
    case IndexId::RA: return "RA";
    case IndexId::CRA: return "CRA";
    case IndexId::PA: return "PA";
    case IndexId::SCF_CN: return "SCF_CN";
    case IndexId::SCF_AA: return "SCF_AA";
    case IndexId::SCF_RA: return "SCF_RA";
    case IndexId::SCF_CRA: return "SCF_CRA";
    case IndexId::TILDE: return "TILDE";
    case IndexId::TILDE_STAR: return "TILDE_STAR";
    case IndexId::CLE: return "CLE";
    case IndexId::CLE_STAR: return "CLE_STAR";
    case IndexId::KATZ: return "KATZ";
    case IndexId::LP: return "LP";
    case IndexId::LO: return "LO";
  }
  return "?";
}

inline std::optional<IndexId> index_from_string(std::string_view name) {
  for (IndexId id : kAllIndices)
    if (to_string(id) == name) return id;
  return std::nullopt;
}

inline bool uses_alpha(IndexId id) {
  return id == IndexId::TILDE_STAR || id == IndexId::CLE_STAR || id == IndexId::LO;
}
inline bool uses_beta(IndexId id) { return id == IndexId::KATZ; }
inline bool uses_epsilon(IndexId id) { return id == IndexId::LP; }
inline bool uses_spectrum(IndexId id) {
  return id == IndexId::TILDE || id == IndexId::TILDE_STAR || id == IndexId::CLE ||
         id == IndexId::CLE_STAR;
}
inline bool is_dense(IndexId id) { return id == IndexId::KATZ || id == IndexId::LO; }

// An index together with exactly the parameters it uses.
struct IndexConfig {
  IndexId id = IndexId::CN;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> epsilon;

  static IndexConfig plain(IndexId id) { return checked({id, {}, {}, {}}); }
  static IndexConfig with_alpha(IndexId id, double a) { return checked({id, a, {}, {}}); }
  static IndexConfig katz(double b) { return checked({IndexId::KATZ, {}, b, {}}); }
  static IndexConfig lp(double e) { return checked({IndexId::LP, {}, {}, e}); }

  static IndexConfig checked(IndexConfig c) {
    c.validate();
    return c;
  }

  void validate() const {
    auto need = [&](bool used, const std::optional<double>& p, const char* name) {
      if (used && !p) {
        throw InvalidArgument(std::string(to_string(id)) + " requires parameter " + name);
      }
      if (!used && p) {
        throw InvalidArgument(std::string(to_string(id)) + " does not take parameter " + name);
      }
      if (p && !std::isfinite(*p)) throw InvalidArgument(std::string(name) + " must be finite");
    };
    need(uses_alpha(id), alpha, "alpha");
    need(uses_beta(id), beta, "beta");
    need(uses_epsilon(id), epsilon, "epsilon");
    if (beta && !(*beta > 0)) throw InvalidArgument("beta must be positive");
    if (id == IndexId::LO && !(*alpha > 0)) throw InvalidArgument("LO alpha must be positive");
  }

  // "alpha=0.5" style, empty for parameter-free indices.
  std::string params() const {
    auto text = [](const char* key, double v) {
      char buf[32];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
      return std::string(key) + "=" + std::string(buf, end);
    };
    if (alpha) return text("alpha", *alpha);
    if (beta) return text("beta", *beta);
    if (epsilon) return text("epsilon", *epsilon);
    return {};
  }

  std::string name() const {
    auto p = params();
    return p.empty() ? std::string(to_string(id))
                     : std::string(to_string(id)) + "(" + p + ")";
  }

  friend bool operator==(const IndexConfig&, const IndexConfig&) = default;
};

struct NodePair {
  node_t x = 0;
  node_t y = 0;
  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

// Scores of one index over an explicit pair set; pairs are stored x < y.
struct ScoreTable {
  IndexConfig config;
  std::vector<NodePair> pairs;
  std::vector<double> scores;

  std::size_t size() const noexcept { return pairs.size(); }
};

// ---------------------------------------------------------------------------
// Per-pair scores. Every function accepts x == y, which the self-included
// enhancement needs for its diagonal terms.

inline std::size_t common_neighbors(const Graph& g, node_t x, node_t y) {
  auto a = g.neighbors(x), b = g.neighbors(y);
  std::size_t i = 0, j = 0, count = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else { ++count; ++i; ++j; }
  }
  return count;
}

template <class F>
void for_each_common_neighbor(const Graph& g, node_t x, node_t y, F&& f) {
  auto a = g.neighbors(x), b = g.neighbors(y);
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else { f(a[i]); ++i; ++j; }
  }
}

inline double adamic_adar(const Graph& g, node_t x, node_t y) {
  double s = 0;
  for_each_common_neighbor(g, x, y, [&](node_t z) {
    const auto k = g.degree(z);
    if (k > 1) s += 1.0 / std::log(double(k));
  });
  return s;
}

inline double resource_allocation(const Graph& g, node_t x, node_t y) {
  double s = 0;
  for_each_common_neighbor(g, x, y, [&](node_t z) { s += 1.0 / double(g.degree(z)); });
  return s;
}

// Sum over common neighbors z of |N(z) & N(x) & N(y)| / k_z.
inline double cannistraci_resource_allocation(const Graph& g, node_t x, node_t y) {
  std::vector<node_t> common;
  for_each_common_neighbor(g, x, y, [&](node_t z) { common.push_back(z); });
  double s = 0;
  for (node_t z : common) {
    auto row = g.neighbors(z);
    std::size_t gamma = 0, i = 0, j = 0;
    while (i < row.size() && j < common.size()) {
      if (row[i] < common[j]) ++i;
      else if (common[j] < row[i]) ++j;
      else { ++gamma; ++i; ++j; }
    }
    s += double(gamma) / double(g.degree(z));
  }
  return s;
}

inline double preferential_attachment(const Graph& g, node_t x, node_t y) {
  return double(g.degree(x)) * double(g.degree(y));
}

/**
 * Self-included collaborative filtering applied to an arbitrary symmetric
 * base similarity, one entry at a time:
 *   sum_{z in N(x)+x} base(z, y) + sum_{z in N(y)+y} base(z, x).
 */
template <class Base>
double scf_entry(const Graph& g, Base&& base, node_t x, node_t y) {
  double s = base(x, y) + base(y, x);
  for (node_t z : g.neighbors(x)) s += base(z, y);
  for (node_t z : g.neighbors(y)) s += base(z, x);
  return s;
}

inline double local_entry(const Graph& g, IndexId id, node_t x, node_t y) {
  switch (id) {
    case IndexId::CN: return double(common_neighbors(g, x, y));
    case IndexId::AA: return adamic_adar(g, x, y);
    case IndexId::RA: return resource_allocation(g, x, y);
    case IndexId::CRA: return cannistraci_resource_allocation(g, x, y);
    case IndexId::PA: return preferential_attachment(g, x, y);
    default: throw InvalidArgument(std::string(to_string(id)) + " is not a local index");
  }
}

// Coefficient of v1 v1^T added to A^2: lambda_2^2 - lambda_1^2 for the
// parameter-free form, (alpha - 1) lambda_1^2 for the tunable one.
inline double leading_correction(const SpectralSummary& s, std::optional<double> alpha) {
  if (s.k() < 2) throw InvalidArgument("spectral summary needs k >= 2");
  const double l1 = s.eigenvalues[0] * s.eigenvalues[0];
  if (l1 == 0.0) throw NumericalError("leading eigenvalue is zero");
  if (alpha) return (*alpha - 1.0) * l1;
  return s.eigenvalues[1] * s.eigenvalues[1] - l1;
}

inline double controlled_cn_entry(const Graph& g, const SpectralSummary& s,
                                  double correction, node_t x, node_t y) {
  const auto& v1 = s.eigenvectors[0];
  return double(common_neighbors(g, x, y)) + correction * v1[x] * v1[y];
}

inline double local_path_entry(const Graph& g, double epsilon, node_t x, node_t y) {
  double paths3 = 0;
  for (node_t z : g.neighbors(x)) paths3 += double(common_neighbors(g, z, y));
  return double(common_neighbors(g, x, y)) + epsilon * paths3;
}

namespace detail {

inline NodePair checked_pair(const Graph& g, NodePair p) {
  if (p.x >= g.n() || p.y >= g.n()) throw InvalidArgument("node id out of range");
  if (p.x == p.y) throw InvalidArgument("pair endpoints must differ");
  if (p.x > p.y) std::swap(p.x, p.y);
  return p;
}

template <class F>
ScoreTable tabulate(const Graph& g, IndexConfig config, std::span<const NodePair> pairs, F&& f) {
  ScoreTable t;
  t.config = std::move(config);
  t.pairs.reserve(pairs.size());
  t.scores.reserve(pairs.size());
  for (NodePair p : pairs) {
    p = checked_pair(g, p);
    t.pairs.push_back(p);
    t.scores.push_back(f(p.x, p.y));
  }
  return t;
}

inline void check_scf_base(IndexId base) {
  if (base != IndexId::CN && base != IndexId::AA && base != IndexId::RA &&
      base != IndexId::CRA) {
    throw InvalidArgument("SCF base must be one of CN, AA, RA, CRA");
  }
}

inline IndexId scf_of(IndexId base) {
  switch (base) {
    case IndexId::CN: return IndexId::SCF_CN;
    case IndexId::AA: return IndexId::SCF_AA;
    case IndexId::RA: return IndexId::SCF_RA;
    default: return IndexId::SCF_CRA;
  }
}

inline IndexId scf_base(IndexId scf) {
  switch (scf) {
    case IndexId::SCF_CN: return IndexId::CN;
    case IndexId::SCF_AA: return IndexId::AA;
    case IndexId::SCF_RA: return IndexId::RA;
    case IndexId::SCF_CRA: return IndexId::CRA;
    default: throw InvalidArgument("not an SCF index");
  }
}

}  // namespace detail

// All pairs x < y.
inline std::vector<NodePair> all_pairs(node_t n) {
  std::vector<NodePair> out;
  out.reserve(std::size_t(n) * (n > 0 ? n - 1 : 0) / 2);
  for (node_t x = 0; x < n; ++x)
    for (node_t y = x + 1; y < n; ++y) out.push_back({x, y});
  return out;
}

inline ScoreTable score_local(const Graph& g, IndexId id, std::span<const NodePair> pairs) {
  if (id != IndexId::CN && id != IndexId::AA && id != IndexId::RA && id != IndexId::CRA &&
      id != IndexId::PA) {
    throw InvalidArgument(std::string(to_string(id)) + " is not a local index");
  }
  return detail::tabulate(g, IndexConfig::plain(id), pairs,
                          [&](node_t x, node_t y) { return local_entry(g, id, x, y); });
}

inline ScoreTable scf_enhance(const Graph& g, IndexId base_id, std::span<const NodePair> pairs) {
  detail::check_scf_base(base_id);
  auto base = [&](node_t a, node_t b) { return local_entry(g, base_id, a, b); };
  return detail::tabulate(g, IndexConfig::plain(detail::scf_of(base_id)), pairs,
                          [&](node_t x, node_t y) { return scf_entry(g, base, x, y); });
}

inline ScoreTable tilde_scores(const Graph& g, const SpectralSummary& s,
                               std::span<const NodePair> pairs) {
  const double c = leading_correction(s, std::nullopt);
  return detail::tabulate(g, IndexConfig::plain(IndexId::TILDE), pairs,
                          [&](node_t x, node_t y) { return controlled_cn_entry(g, s, c, x, y); });
}

inline ScoreTable tilde_star_scores(const Graph& g, const SpectralSummary& s, double alpha,
                                    std::span<const NodePair> pairs) {
  const double c = leading_correction(s, alpha);
  return detail::tabulate(g, IndexConfig::with_alpha(IndexId::TILDE_STAR, alpha), pairs,
                          [&](node_t x, node_t y) { return controlled_cn_entry(g, s, c, x, y); });
}

inline ScoreTable cle_scores(const Graph& g, const SpectralSummary& s,
                             std::span<const NodePair> pairs) {
  const double c = leading_correction(s, std::nullopt);
  auto base = [&](node_t a, node_t b) { return controlled_cn_entry(g, s, c, a, b); };
  return detail::tabulate(g, IndexConfig::plain(IndexId::CLE), pairs,
                          [&](node_t x, node_t y) { return scf_entry(g, base, x, y); });
}

inline ScoreTable cle_star_scores(const Graph& g, const SpectralSummary& s, double alpha,
                                  std::span<const NodePair> pairs) {
  const double c = leading_correction(s, alpha);
  auto base = [&](node_t a, node_t b) { return controlled_cn_entry(g, s, c, a, b); };
  return detail::tabulate(g, IndexConfig::with_alpha(IndexId::CLE_STAR, alpha), pairs,
                          [&](node_t x, node_t y) { return scf_entry(g, base, x, y); });
}

inline ScoreTable lp_scores(const Graph& g, double epsilon, std::span<const NodePair> pairs) {
  return detail::tabulate(g, IndexConfig::lp(epsilon), pairs,
                          [&](node_t x, node_t y) { return local_path_entry(g, epsilon, x, y); });
}

// ---------------------------------------------------------------------------
// Global indices, evaluated densely.

inline constexpr node_t kDefaultDenseCap = 5000;

namespace detail {

inline void check_dense_cap(const Graph& g, node_t cap) {
  if (g.n() > cap) {
    throw ResourceError("dense evaluation needs N <= " + std::to_string(cap) + ", got N = " +
                        std::to_string(g.n()));
  }
}

inline Eigen::MatrixXd dense_adjacency(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

// Rows of A^2 via two-hop expansion.
inline Eigen::MatrixXd dense_common_neighbors(const Graph& g) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (node_t x = 0; x < g.n(); ++x)
    for (node_t z : g.neighbors(x))
      for (node_t y : g.neighbors(z)) c(x, y) += 1.0;
  return c;
}

inline ScoreTable all_pairs_table(const Eigen::MatrixXd& m, IndexConfig config) {
  ScoreTable t;
  t.config = std::move(config);
  const auto n = node_t(m.rows());
  t.pairs = all_pairs(n);
  t.scores.reserve(t.pairs.size());
  for (const auto& p : t.pairs) t.scores.push_back(m(p.x, p.y));
  return t;
}

}  // namespace detail

inline double spectral_radius(const Graph& g, LanczosOptions options = {}) {
  if (g.m() == 0) return 0.0;
  return std::abs(top_eigenpairs(g, 1, options).eigenvalues[0]);
}

/**
 * (I - beta A)^{-1} - I. Requires beta * lambda_1 < 1; pass the spectral
 * radius when it is already known to skip the eigensolve.
 */
inline Eigen::MatrixXd katz_matrix(const Graph& g, double beta, node_t dense_cap = kDefaultDenseCap,
                                   std::optional<double> radius = std::nullopt) {
  if (!(beta > 0)) throw InvalidArgument("beta must be positive");
  detail::check_dense_cap(g, dense_cap);
  const double rho = radius ? *radius : spectral_radius(g);
  if (beta * rho >= 1.0) {
    throw NumericalError("Katz series diverges: beta * lambda_1 = " + std::to_string(beta * rho) +
                         " >= 1");
  }
  const Eigen::Index n = g.n();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - beta * detail::dense_adjacency(g);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("Katz system is not positive definite");
  Eigen::MatrixXd s = llt.solve(Eigen::MatrixXd::Identity(n, n));
  s.diagonal().array() -= 1.0;
  return s;
}

// alpha A (alpha A^2 + I)^{-1} A^2 for symmetric A.
inline Eigen::MatrixXd lo_matrix(const Graph& g, double alpha, node_t dense_cap = kDefaultDenseCap) {
  if (!(alpha > 0)) throw InvalidArgument("LO alpha must be positive");
  detail::check_dense_cap(g, dense_cap);
  const Eigen::Index n = g.n();
  const Eigen::MatrixXd a2 = detail::dense_common_neighbors(g);
  Eigen::MatrixXd m = alpha * a2;
  m.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("LO system is not positive definite");
  const Eigen::MatrixXd z = llt.solve(a2);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (node_t x = 0; x < g.n(); ++x)
    for (node_t w : g.neighbors(x)) s.row(x) += z.row(w);
  s *= alpha;
  return s;
}

inline ScoreTable katz_scores(const Graph& g, double beta, node_t dense_cap = kDefaultDenseCap) {
  return detail::all_pairs_table(katz_matrix(g, beta, dense_cap), IndexConfig::katz(beta));
}

inline ScoreTable lo_scores(const Graph& g, double alpha, node_t dense_cap = kDefaultDenseCap) {
  return detail::all_pairs_table(lo_matrix(g, alpha, dense_cap),
                                 IndexConfig::with_alpha(IndexId::LO, alpha));
}

// ---------------------------------------------------------------------------
// Row kernels: add weight * S(z, .) into a dense row. Used to score every
// candidate pair of a graph without going pair by pair.

struct RowWorkspace {
  std::vector<double> scratch;
  std::vector<char> mark;
  std::vector<std::uint32_t> stamp;
  std::uint32_t clock = 0;

  explicit RowWorkspace(node_t n = 0) : scratch(n, 0.0), mark(n, 0), stamp(n, 0) {}

  std::uint32_t tick() {
    if (++clock == 0) {
      std::fill(stamp.begin(), stamp.end(), 0);
      clock = 1;
    }
    return clock;
  }
};

namespace kernel {

struct CommonNeighbors {
  const Graph* g;
  double pair(node_t x, node_t y) const { return double(common_neighbors(*g, x, y)); }
  void add_row(node_t z, double w, std::span<double> out, RowWorkspace&) const {
    for (node_t u : g->neighbors(z))
      for (node_t y : g->neighbors(u)) out[y] += w;
  }
};

struct AdamicAdar {
  const Graph* g;
  double pair(node_t x, node_t y) const { return adamic_adar(*g, x, y); }
  void add_row(node_t z, double w, std::span<double> out, RowWorkspace&) const {
    for (node_t u : g->neighbors(z)) {
      const auto k = g->degree(u);
      if (k <= 1) continue;
      const double c = w / std::log(double(k));
      for (node_t y : g->neighbors(u)) out[y] += c;
    }
  }
};

struct ResourceAllocation {
  const Graph* g;
  double pair(node_t x, node_t y) const { return resource_allocation(*g, x, y); }
  void add_row(node_t z, double w, std::span<double> out, RowWorkspace&) const {
    for (node_t u : g->neighbors(z)) {
      const double c = w / double(g->degree(u));
      for (node_t y : g->neighbors(u)) out[y] += c;
    }
  }
};

struct CannistraciRA {
  const Graph* g;
  double pair(node_t x, node_t y) const { return cannistraci_resource_allocation(*g, x, y); }
  // For each common neighbor u of (z, y), every t adjacent to z, u and y
  // contributes 1 / k_u.
  void add_row(node_t z, double w, std::span<double> out, RowWorkspace& ws) const {
    for (node_t t : g->neighbors(z)) ws.mark[t] = 1;
    for (node_t u : g->neighbors(z)) {
      const std::uint32_t tick = ws.tick();
      for (node_t y : g->neighbors(u)) ws.stamp[y] = tick;
      const double c = w / double(g->degree(u));
      for (node_t t : g->neighbors(u)) {
        if (!ws.mark[t]) continue;
        for (node_t y : g->neighbors(t))
          if (ws.stamp[y] == tick) out[y] += c;
      }
    }
    for (node_t t : g->neighbors(z)) ws.mark[t] = 0;
  }
};

struct PreferentialAttachment {
  const Graph* g;
  double pair(node_t x, node_t y) const { return preferential_attachment(*g, x, y); }
  void add_row(node_t z, double w, std::span<double> out, RowWorkspace&) const {
    const double kz = w * double(g->degree(z));
    for (node_t y = 0; y < g->n(); ++y) out[y] += kz * double(g->degree(y));
  }
};

// A^2 + correction * v1 v1^T.
struct ControlledCN {
  const Graph* g;
  std::span<const double> v1;
  double correction;
  double pair(node_t x, node_t y) const {
    return double(common_neighbors(*g, x, y)) + correction * v1[x] * v1[y];
  }
  void add_row(node_t z, double w, std::span<double> out, RowWorkspace& ws) const {
    CommonNeighbors{g}.add_row(z, w, out, ws);
    const double c = w * correction * v1[z];
    for (node_t y = 0; y < g->n(); ++y) out[y] += c * v1[y];
  }
};

struct LocalPath {
  const Graph* g;
  double epsilon;
  double pair(node_t x, node_t y) const { return local_path_entry(*g, epsilon, x, y); }
  void add_row(node_t z, double w, std::span<double> out, RowWorkspace& ws) const {
    CommonNeighbors cn{g};
    cn.add_row(z, w, out, ws);
    if (epsilon == 0.0) return;
    for (node_t u : g->neighbors(z)) cn.add_row(u, w * epsilon, out, ws);
  }
};

struct Dense {
  std::shared_ptr<const Eigen::MatrixXd> m;
  double pair(node_t x, node_t y) const {
    return x < y ? (*m)(x, y) : (*m)(y, x);
  }
  void add_row(node_t z, double w, std::span<double> out, RowWorkspace&) const {
    for (Eigen::Index y = 0; y < m->cols(); ++y) out[std::size_t(y)] += w * (*m)(z, y);
  }
};

template <class Base>
struct Scf {
  const Graph* g;
  Base base;
  double pair(node_t x, node_t y) const {
    return scf_entry(*g, [&](node_t a, node_t b) { return base.pair(a, b); }, x, y);
  }
  // Row x of (A+I)S + S(A+I), using the symmetry of S for the second term.
  void add_row(node_t x, double w, std::span<double> out, RowWorkspace& ws) const {
    base.add_row(x, w, out, ws);
    for (node_t z : g->neighbors(x)) base.add_row(z, w, out, ws);
    std::vector<double>& row = ws.scratch;
    base.add_row(x, 1.0, row, ws);
    for (node_t u = 0; u < g->n(); ++u) {
      const double s = row[u];
      if (s == 0.0) continue;
      row[u] = 0.0;
      out[u] += w * s;
      for (node_t y : g->neighbors(u)) out[y] += w * s;
    }
  }
};

}  // namespace kernel

struct ScorerOptions {
  node_t dense_cap = kDefaultDenseCap;
  LanczosOptions lanczos;
};

/**
 * A prepared index over one (training) graph: eigenpairs or dense matrices
 * are computed once at construction. `pair` evaluates one entry with the
 * per-pair formulas; `row` fills S(x, .) for every node at once.
 */
class Scorer {
 public:
  Scorer(const Graph& g, IndexConfig config, ScorerOptions options = {})
      : g_(&g), config_(std::move(config)) {
    config_.validate();
    const IndexId id = config_.id;
    if (uses_spectrum(id)) {
      if (g.m() == 0) throw NumericalError("leading eigenvalue is zero (graph has no edges)");
      spectrum_ = std::make_shared<SpectralSummary>(top_eigenpairs(g, 2, options.lanczos));
      const double c = leading_correction(*spectrum_, config_.alpha);
      kernel::ControlledCN base{g_, spectrum_->eigenvectors[0], c};
      if (id == IndexId::TILDE || id == IndexId::TILDE_STAR) kernel_ = base;
      else kernel_ = kernel::Scf<kernel::ControlledCN>{g_, base};
      return;
    }
    switch (id) {
      case IndexId::CN: kernel_ = kernel::CommonNeighbors{g_}; break;
      case IndexId::AA: kernel_ = kernel::AdamicAdar{g_}; break;
      case IndexId::RA: kernel_ = kernel::ResourceAllocation{g_}; break;
      case IndexId::CRA: kernel_ = kernel::CannistraciRA{g_}; break;
      case IndexId::PA: kernel_ = kernel::PreferentialAttachment{g_}; break;
      case IndexId::SCF_CN: kernel_ = kernel::Scf<kernel::CommonNeighbors>{g_, {g_}}; break;
      case IndexId::SCF_AA: kernel_ = kernel::Scf<kernel::AdamicAdar>{g_, {g_}}; break;
      case IndexId::SCF_RA: kernel_ = kernel::Scf<kernel::ResourceAllocation>{g_, {g_}}; break;
      case IndexId::SCF_CRA: kernel_ = kernel::Scf<kernel::CannistraciRA>{g_, {g_}}; break;
      case IndexId::LP: kernel_ = kernel::LocalPath{g_, *config_.epsilon}; break;
      case IndexId::KATZ: {
        const double rho = spectral_radius(g, options.lanczos);
        kernel_ = kernel::Dense{std::make_shared<const Eigen::MatrixXd>(
            katz_matrix(g, *config_.beta, options.dense_cap, rho))};
        break;
      }
      case IndexId::LO:
        kernel_ = kernel::Dense{std::make_shared<const Eigen::MatrixXd>(
            lo_matrix(g, *config_.alpha, options.dense_cap))};
        break;
      default: throw InvalidArgument("unsupported index");
    }
  }

  const IndexConfig& config() const noexcept { return config_; }
  const Graph& graph() const noexcept { return *g_; }
  const SpectralSummary* spectrum() const noexcept { return spectrum_.get(); }

  RowWorkspace workspace() const { return RowWorkspace(g_->n()); }

  double pair(node_t x, node_t y) const {
    return std::visit([&](const auto& k) { return k.pair(x, y); }, kernel_);
  }

  // out must have size N; it is overwritten with S(x, .).
  void row(node_t x, std::span<double> out, RowWorkspace& ws) const {
    std::fill(out.begin(), out.end(), 0.0);
    std::visit([&](const auto& k) { k.add_row(x, 1.0, out, ws); }, kernel_);
  }

  ScoreTable score(std::span<const NodePair> pairs) const {
    return detail::tabulate(*g_, config_, pairs, [&](node_t x, node_t y) { return pair(x, y); });
  }

 private:
  using Kernel = std::variant<kernel::CommonNeighbors, kernel::AdamicAdar,
                              kernel::ResourceAllocation, kernel::CannistraciRA,
                              kernel::PreferentialAttachment, kernel::ControlledCN,
                              kernel::LocalPath, kernel::Dense,
                              kernel::Scf<kernel::CommonNeighbors>,
                              kernel::Scf<kernel::AdamicAdar>,
                              kernel::Scf<kernel::ResourceAllocation>,
                              kernel::Scf<kernel::CannistraciRA>,
                              kernel::Scf<kernel::ControlledCN>>;

  const Graph* g_;
  IndexConfig config_;
  std::shared_ptr<SpectralSummary> spectrum_;
  Kernel kernel_;
};

// ---------------------------------------------------------------------------
// CSV: x_label,y_label,score sorted by descending score, then by pair.

inline std::vector<std::size_t> ranking_order(const ScoreTable& t) {
  std::vector<std::size_t> order(t.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (t.scores[a] != t.scores[b]) return t.scores[a] > t.scores[b];
    return t.pairs[a] < t.pairs[b];
  });
  return order;
}

inline void write_score_csv(std::ostream& out, const ScoreTable& t, const Graph& g) {
  out << "x_label,y_label,score\n";
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i : ranking_order(t)) {
    line.str("");
    line << g.label(t.pairs[i].x) << ',' << g.label(t.pairs[i].y) << ',' << t.scores[i] << '\n';
    out << line.str();
  }
}

inline ScoreTable read_score_csv(std::istream& in, const Graph& g, IndexConfig config) {
  std::unordered_map<std::string, node_t> ids;
  for (node_t x = 0; x < g.n(); ++x) ids.emplace(g.label(x), x);
  ScoreTable t;
  t.config = std::move(config);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, s;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') ||
        !std::getline(fields, s)) {
      throw ParseError(line_no, "expected x_label,y_label,score");
    }
    auto ia = ids.find(a), ib = ids.find(b);
    if (ia == ids.end() || ib == ids.end()) throw ParseError(line_no, "unknown node label");
    t.pairs.push_back(detail::checked_pair(g, {ia->second, ib->second}));
    t.scores.push_back(std::stod(s));
  }
  return t;
}

}  // namespace linkpred
