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
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "linkpred/error.hpp"
#include "linkpred/graph.hpp"

namespace linkpred {

/**
 * Leading eigenpairs of the adjacency matrix, ordered by squared eigenvalue
 * (ties: positive eigenvalue first), each eigenvector unit-norm.
 *
 * The first eigenvector is signed so that its entries sum to >= 0; the
 * others use the same rule, falling back to a positive first significant
 * entry when the sum vanishes.
 */
struct SpectralSummary {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
  std::vector<double> residuals;
  double delta = std::numeric_limits<double>::quiet_NaN();
  std::size_t matvecs = 0;

  std::size_t k() const noexcept { return eigenvalues.size(); }
  std::size_t n() const noexcept {
    return eigenvectors.empty() ? 0 : eigenvectors.front().size();
  }

  double lambda(std::size_t d) const { return eigenvalues.at(d - 1); }
  std::span<const double> vector(std::size_t d) const {
    return eigenvectors.at(d - 1);
  }

  // Entry (x, y) of the rank-one component v_d v_d^T, d is 1-based.
  double component_entry(std::size_t d, node_t x, node_t y) const {
    if (d < 1 || d > k()) throw InvalidArgument("component index out of range");
    const auto& v = eigenvectors[d - 1];
    if (x >= v.size() || y >= v.size()) throw InvalidArgument("node out of range");
    return v[x] * v[y];
  }

  // Node embedding restricted to the retained pairs: (lambda_d * v_dx)_d.
  std::vector<double> embedding(node_t x) const {
    std::vector<double> w(k());
    for (std::size_t d = 0; d < k(); ++d) w[d] = eigenvalues[d] * eigenvectors[d].at(x);
    return w;
  }
};

struct LanczosOptions {
  double tol = 1e-10;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  // Matrix-vector products per attempt; 0 means 10 * N.
  std::size_t max_matvecs = 0;
};

namespace detail {

inline void adjacency_multiply(const Graph& g, const Eigen::VectorXd& v,
                               Eigen::VectorXd& out) {
  out.resize(g.n());
  for (node_t x = 0; x < g.n(); ++x) {
    double s = 0;
    for (node_t y : g.neighbors(x)) s += v[y];
    out[x] = s;
  }
}

struct RitzPair {
  double value = 0;
  Eigen::VectorXd vector;
  double residual = 0;
};

inline bool square_tied(double a, double b) {
  return std::abs(a * a - b * b) <= 1e-9 * std::max(1.0, std::max(a * a, b * b));
}

// Indices of `values` by descending square, positive first among near-ties.
inline std::vector<std::size_t> rank_order(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] * values[a] > values[b] * values[b];
  });
  for (bool swapped = true; swapped;) {
    swapped = false;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const double a = values[order[i]], b = values[order[i + 1]];
      if (a < 0 && b > 0 && square_tied(a, b)) {
        std::swap(order[i], order[i + 1]);
        swapped = true;
      }
    }
  }
  return order;
}

inline void sort_by_square(std::vector<RitzPair>& pairs) {
  std::vector<double> values;
  for (const auto& p : pairs) values.push_back(p.value);
  std::vector<RitzPair> sorted;
  for (std::size_t i : rank_order(values)) sorted.push_back(std::move(pairs[i]));
  pairs = std::move(sorted);
}

// True when `a` must be ranked ahead of `b`.
inline bool outranks(double a, double b) {
  if (square_tied(a, b)) return a > 0 && b < 0;
  return a * a > b * b;
}

inline void orthogonalize(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& basis) {
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) w -= q.dot(w) * q;
}

struct LanczosRun {
  std::vector<RitzPair> pairs;  // top `want` by |value|, sorted
  bool converged = false;
  double best_residual = std::numeric_limits<double>::infinity();
};

/**
 * One Lanczos process with full reorthogonalization on the adjacency
 * operator restricted to the orthogonal complement of `locked`. On an
 * invariant-subspace breakdown it continues from a fresh random vector,
 * which is how repeated eigenvalues become visible.
 */
inline LanczosRun lanczos(const Graph& g, const std::vector<Eigen::VectorXd>& locked,
                          std::size_t want, double tol, std::size_t budget,
                          std::mt19937_64& rng, std::size_t& matvecs) {
  const std::size_t n = g.n();
  const std::size_t available = n - locked.size();
  LanczosRun run;
  if (available == 0 || want == 0) {
    run.converged = true;
    return run;
  }
  want = std::min(want, available);

  std::normal_distribution<double> normal;
  auto random_unit = [&](const std::vector<Eigen::VectorXd>& basis) -> std::optional<Eigen::VectorXd> {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXd v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = normal(rng);
      orthogonalize(v, locked);
      orthogonalize(v, basis);
      const double norm = v.norm();
      if (norm > 1e-8 * std::sqrt(double(n))) return v / norm;
    }
    return std::nullopt;
  };

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;
  auto start = random_unit(basis);
  if (!start) return run;
  basis.push_back(*start);

  double scale = 1.0;
  for (node_t x = 0; x < g.n(); ++x) scale = std::max(scale, double(g.degree(x)));

  Eigen::VectorXd w(n), work(n);
  std::size_t used = 0;
  while (true) {
    const std::size_t j = basis.size() - 1;
    adjacency_multiply(g, basis[j], w);
    ++used;
    ++matvecs;
    alpha.push_back(basis[j].dot(w));
    orthogonalize(w, locked);
    orthogonalize(w, basis);
    const double b = w.norm();
    const std::size_t m = basis.size();
    const bool breakdown = b < 1e-12 * scale;
    std::optional<Eigen::VectorXd> restart;
    if (breakdown && m < available) restart = random_unit(basis);
    // A breakdown with no fresh direction left means the complement is spanned.
    const bool exhausted = m == available || (breakdown && !restart);

    const bool check = exhausted || breakdown || used >= budget ||
                       (m >= want && (m <= 40 || m % 8 == 0));
    if (check) {
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), Eigen::Index(m));
      Eigen::VectorXd sub(Eigen::Index(m > 0 ? m - 1 : 0));
      for (std::size_t i = 0; i + 1 < m; ++i) sub[Eigen::Index(i)] = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const auto& theta = tri.eigenvalues();
      const auto& s = tri.eigenvectors();

      std::vector<double> values(theta.data(), theta.data() + m);
      const auto order = rank_order(values);
      const double top = std::abs(theta[Eigen::Index(order[0])]);
      const double limit = tol * std::max(1.0, top);
      const double tail = breakdown ? 0.0 : b;
      const std::size_t take = std::min(want, m);

      bool estimates_ok = take == want;
      for (std::size_t r = 0; r < take && estimates_ok; ++r) {
        const double est = std::abs(tail * s(Eigen::Index(m - 1), Eigen::Index(order[r])));
        if (est > limit) estimates_ok = false;
      }
      if (estimates_ok || exhausted || used >= budget) {
        std::vector<RitzPair> pairs;
        bool all_ok = take == want;
        for (std::size_t r = 0; r < take; ++r) {
          RitzPair p;
          p.value = theta[Eigen::Index(order[r])];
          p.vector = Eigen::VectorXd::Zero(Eigen::Index(n));
          for (std::size_t i = 0; i < m; ++i)
            p.vector += s(Eigen::Index(i), Eigen::Index(order[r])) * basis[i];
          p.vector.normalize();
          adjacency_multiply(g, p.vector, work);
          ++matvecs;
          p.residual = (work - p.value * p.vector).norm();
          if (p.residual > limit) all_ok = false;
          run.best_residual = std::min(run.best_residual, p.residual);
          pairs.push_back(std::move(p));
        }
        if (all_ok || exhausted || used >= budget) {
          sort_by_square(pairs);
          run.pairs = std::move(pairs);
          run.converged = all_ok;
          return run;
        }
      }
    }

    if (breakdown) {
      beta.push_back(0.0);
      basis.push_back(std::move(*restart));
    } else {
      beta.push_back(b);
      basis.push_back(w / b);
    }
  }
}

inline void canonical_sign(Eigen::VectorXd& v) {
  const double sum = v.sum();
  if (std::abs(sum) > 1e-10) {
    if (sum < 0) v = -v;
    return;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-8) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

}  // namespace detail

/**
 * The `k` eigenpairs of largest |lambda| by Lanczos iteration with full
 * reorthogonalization and locking. After the requested pairs converge, one
 * more deflated run checks that no larger eigenvalue (e.g. a second copy of
 * a repeated one) was missed.
 *
 * Each run gets 10 * N matrix-vector products; a run that does not converge
 * is retried once from a fresh random vector before giving up.
 */
inline SpectralSummary top_eigenpairs(const Graph& g, std::size_t k,
                                      LanczosOptions options = {}) {
  const std::size_t n = g.n();
  if (n < 2) throw InvalidArgument("spectrum needs at least 2 nodes");
  if (k < 1 || k > n) throw InvalidArgument("k must satisfy 1 <= k <= N");
  if (k > 32) throw InvalidArgument("at most 32 eigenpairs are supported");
  if (!(options.tol > 0)) throw InvalidArgument("tolerance must be positive");
  const std::size_t budget = options.max_matvecs ? options.max_matvecs : 10 * n;

  std::mt19937_64 rng(options.seed);
  std::vector<detail::RitzPair> found;
  std::vector<Eigen::VectorXd> locked;
  std::size_t matvecs = 0;

  auto run_with_retry = [&](std::size_t want) {
    auto run = detail::lanczos(g, locked, want, options.tol, budget, rng, matvecs);
    if (!run.converged) {
      run = detail::lanczos(g, locked, want, options.tol, budget, rng, matvecs);
    }
    return run;
  };

  while (found.size() < k) {
    auto run = run_with_retry(k - found.size());
    if (!run.converged) {
      throw ConvergenceError("Lanczos did not converge", run.best_residual);
    }
    if (run.pairs.empty()) break;
    for (auto& p : run.pairs) {
      locked.push_back(p.vector);
      found.push_back(std::move(p));
    }
  }

  // Look for anything in the complement that should displace the k-th pair.
  while (found.size() < n) {
    detail::sort_by_square(found);
    const double weakest = found[k - 1].value;
    auto run = detail::lanczos(g, locked, 1, options.tol, budget, rng, matvecs);
    if (run.pairs.empty()) break;
    const double candidate = run.pairs.front().value;
    if (!detail::outranks(candidate, weakest)) break;
    if (!run.converged) {
      run = detail::lanczos(g, locked, 1, options.tol, budget, rng, matvecs);
      if (!run.converged || run.pairs.empty()) {
        throw ConvergenceError("Lanczos did not converge", run.best_residual);
      }
    }
    locked.push_back(run.pairs.front().vector);
    found.push_back(std::move(run.pairs.front()));
  }
  detail::sort_by_square(found);
  found.resize(k);

  SpectralSummary s;
  s.matvecs = matvecs;
  for (auto& p : found) {
    detail::canonical_sign(p.vector);
    s.eigenvalues.push_back(p.value);
    s.residuals.push_back(p.residual);
    s.eigenvectors.emplace_back(p.vector.data(), p.vector.data() + p.vector.size());
  }
  if (k >= 2 && s.eigenvalues[0] != 0.0) {
    s.delta = (s.eigenvalues[1] * s.eigenvalues[1]) /
              (s.eigenvalues[0] * s.eigenvalues[0]);
  }
  return s;
}

/**
 * Pearson correlation over the pairs x < y between common-neighbor counts
 * and lambda_d^2 v_dx v_dy, for every retained d. Entries are nullopt where
 * either side has zero variance.
 */
inline std::vector<std::optional<double>> pearson_cn_vs_components(
    const Graph& g, const SpectralSummary& s) {
  const std::size_t n = g.n();
  const std::size_t k = s.k();
  if (n < 3) throw InvalidArgument("correlation needs at least 3 nodes");
  if (s.n() != n) throw InvalidArgument("spectral summary does not match graph");

  std::vector<double> cn_row(n, 0.0);
  std::vector<node_t> touched;
  auto fill_row = [&](node_t x) {
    for (node_t t : touched) cn_row[t] = 0.0;
    touched.clear();
    for (node_t z : g.neighbors(x))
      for (node_t y : g.neighbors(z)) {
        if (cn_row[y] == 0.0) touched.push_back(y);
        cn_row[y] += 1.0;
      }
  };

  const double pairs = double(n) * double(n - 1) / 2;
  // Pass 1: means.
  double mean_x = 0;
  std::vector<double> mean_y(k, 0.0);
  for (node_t x = 0; x < n; ++x) {
    fill_row(x);
    for (node_t t : touched)
      if (t > x) mean_x += cn_row[t];
  }
  mean_x /= pairs;
  for (std::size_t d = 0; d < k; ++d) {
    const auto& v = s.eigenvectors[d];
    double sum = 0, sq = 0;
    for (double e : v) {
      sum += e;
      sq += e * e;
    }
    const double l2 = s.eigenvalues[d] * s.eigenvalues[d];
    mean_y[d] = l2 * (sum * sum - sq) / 2 / pairs;
  }

  // Pass 2: centered moments.
  double var_x = 0;
  std::vector<double> var_y(k, 0.0), cov(k, 0.0), max_y(k, 0.0);
  for (node_t x = 0; x < n; ++x) {
    fill_row(x);
    for (node_t y = x + 1; y < n; ++y) {
      const double dx = cn_row[y] - mean_x;
      var_x += dx * dx;
      for (std::size_t d = 0; d < k; ++d) {
        const double l2 = s.eigenvalues[d] * s.eigenvalues[d];
        const double yv = l2 * s.eigenvectors[d][x] * s.eigenvectors[d][y];
        const double dy = yv - mean_y[d];
        var_y[d] += dy * dy;
        cov[d] += dx * dy;
        max_y[d] = std::max(max_y[d], std::abs(yv));
      }
    }
  }

  std::vector<std::optional<double>> r(k);
  const bool flat_x = var_x <= 1e-20 * pairs * std::max(1.0, mean_x * mean_x);
  for (std::size_t d = 0; d < k; ++d) {
    const bool flat_y = var_y[d] <= 1e-20 * pairs * std::max(1e-300, max_y[d] * max_y[d]);
    if (flat_x || flat_y) continue;
    r[d] = cov[d] / std::sqrt(var_x * var_y[d]);
  }
  return r;
}

inline double pearson_cn_vs_component(const Graph& g, const SpectralSummary& s,
                                      std::size_t d) {
  if (d < 1 || d > s.k()) throw InvalidArgument("component index out of range");
  auto r = pearson_cn_vs_components(g, s);
  if (!r[d - 1]) throw NumericalError("degenerate correlation: zero variance");
  return *r[d - 1];
}

}  // namespace linkpred
