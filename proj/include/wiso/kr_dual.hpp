// Copyright 2026 The wiso Authors
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

/**
 * @file kr_dual.hpp
 *
 * @brief Kantorovich-Rubinstein dual of W_1: a 1-Lipschitz potential f on
 * the joint support maximizing `int f dnu - int f dmu`.
 *
 * Two routes are offered. `KrMethod::SimplexPotentials` takes the row
 * potentials u of the transportation simplex and forms the c-transform
 * `f(z) = min_i (d(x_i, z) - u_i)`. `KrMethod::IndependentLp` solves the
 * Lipschitz-constrained LP directly with a dense simplex that shares no code
 * with the transportation solver.
 */

#ifndef WISO_KR_DUAL_HPP_
#define WISO_KR_DUAL_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "wiso/lp.hpp"
#include "wiso/measure.hpp"
#include "wiso/metric.hpp"
#include "wiso/transport.hpp"

namespace wiso {

enum class KrMethod { SimplexPotentials, IndependentLp };

template <Scalar T>
struct KrDualResult {
  /// supp(mu) union supp(nu), in canonical order.
  std::vector<Point<T>> points;
  std::vector<T> potential;
  /// `int f dnu - int f dmu`.
  T value{0};

  std::optional<T> at(const Point<T>& p) const {
    auto it = std::lower_bound(points.begin(), points.end(), p);
    if (it == points.end() || !(*it == p)) return std::nullopt;
    return potential[static_cast<std::size_t>(it - points.begin())];
  }
};

namespace detail {

template <Scalar T>
std::vector<Point<T>> joint_support(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  std::vector<Point<T>> pts = mu.support();
  for (const auto& a : nu.atoms()) pts.push_back(a.point);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <Scalar T>
T integrate_difference(const std::vector<Point<T>>& pts, const std::vector<T>& f,
                       const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  T value(0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    value += f[i] * (nu.mass_of(pts[i]) - mu.mass_of(pts[i]));
  }
  return value;
}

}  // namespace detail

template <Scalar T>
KrDualResult<T> kr_dual(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                        KrMethod method = KrMethod::SimplexPotentials,
                        const SolverOptions& options = {}) {
  if (!same_space(mu.space(), nu.space())) {
    throw KindMismatchError("kr_dual: measures live on different spaces");
  }
  const auto& space = *mu.space();
  KrDualResult<T> out;
  out.points = detail::joint_support(mu, nu);
  const std::size_t n = out.points.size();

  if (method == KrMethod::SimplexPotentials) {
    auto res = solve_wasserstein(mu, nu, Exponent(1), options);
    const auto& u = res.duals->u;
    out.potential.reserve(n);
    for (const auto& z : out.points) {
      std::optional<T> best;
      for (std::size_t i = 0; i < mu.size(); ++i) {
        T val = space.distance(mu[i].point, z) - u[i];
        if (!best || val < *best) best = val;
      }
      out.potential.push_back(*best);
    }
    out.value = detail::integrate_difference(out.points, out.potential, mu, nu);
    return out;
  }

  // f_0 = 0 and f_i = g_i - d(z_0, z_i) with g_i >= 0, which turns every
  // Lipschitz constraint f_i - f_k <= d_ik into one with a nonnegative
  // right-hand side.
  out.potential.assign(n, T(0));
  if (n == 1) return out;
  Matrix<T> d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      d(i, k) = space.distance(out.points[i], out.points[k]);
      d(k, i) = d(i, k);
    }
  }
  const std::size_t vars = n - 1;
  const std::size_t rows = vars + vars * (vars - 1);
  Matrix<T> A(rows, vars);
  std::vector<T> b(rows);
  std::size_t r = 0;
  for (std::size_t i = 1; i < n; ++i) {
    A(r, i - 1) = T(1);
    b[r] = d(0, i) + d(0, i);
    ++r;
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t k = 1; k < n; ++k) {
      if (i == k) continue;
      A(r, i - 1) = T(1);
      A(r, k - 1) = T(-1);
      T rhs = d(i, k) + d(0, i) - d(0, k);
      b[r] = rhs < T(0) ? T(0) : rhs;
      ++r;
    }
  }
  std::vector<T> c(vars);
  for (std::size_t i = 1; i < n; ++i) {
    c[i - 1] = nu.mass_of(out.points[i]) - mu.mass_of(out.points[i]);
  }
  auto lp = maximize_lp(A, b, c);
  for (std::size_t i = 1; i < n; ++i) out.potential[i] = lp.x[i - 1] - d(0, i);
  out.value = detail::integrate_difference(out.points, out.potential, mu, nu);
  return out;
}

/// Largest `|f(y) - f(y')| - d(y, y')` over pairs of the joint support.
template <Scalar T>
T lipschitz_excess(const KrDualResult<T>& dual, const MetricSpace<T>& space) {
  T worst(0);
  bool first = true;
  for (std::size_t i = 0; i < dual.points.size(); ++i) {
    for (std::size_t k = i + 1; k < dual.points.size(); ++k) {
      T excess = scalar::abs(T(dual.potential[i] - dual.potential[k])) -
                 space.distance(dual.points[i], dual.points[k]);
      if (first || excess > worst) {
        worst = excess;
        first = false;
      }
    }
  }
  return first ? T(0) : worst;
}

}  // namespace wiso

#endif  // WISO_KR_DUAL_HPP_
