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
 * @file transport.hpp
 *
 * @brief Exact discrete optimal transport by the transportation simplex.
 *
 * The basis is a spanning tree of the bipartite graph rows x cols with
 * m + n - 1 cells, started from the north-west corner rule. Pivots follow
 * Bland's rule (lowest-index entering cell with negative reduced cost,
 * lowest-index leaving cell among ratio-test ties), which terminates on
 * degenerate problems without perturbation. Dual potentials are read off
 * the final basis with u_0 = 0.
 */

#ifndef WISO_TRANSPORT_HPP_
#define WISO_TRANSPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wiso/coupling.hpp"
#include "wiso/error.hpp"
#include "wiso/measure.hpp"
#include "wiso/metric.hpp"
#include "wiso/scalar.hpp"

namespace wiso {

struct SolverOptions {
  double tol = kDefaultTol;
  /// 0 selects the default of 10 * m * n pivots.
  std::size_t pivot_budget = 0;
};

template <Scalar T>
struct TransportationSolution {
  Matrix<T> flow;
  std::vector<T> u;
  std::vector<T> v;
  /// Basic cells (i, j), m + n - 1 of them.
  std::vector<std::pair<std::size_t, std::size_t>> basis;
  std::size_t pivots = 0;
};

namespace detail {

template <Scalar T>
class TransportationSimplex {
 public:
  TransportationSimplex(const Matrix<T>& cost, const std::vector<T>& supply,
                        const std::vector<T>& demand, const SolverOptions& options)
      : cost_(cost),
        supply_(supply),
        demand_(demand),
        m_(supply.size()),
        n_(demand.size()),
        flow_(m_, n_),
        is_basic_(m_ * n_, 0),
        u_(m_),
        v_(n_) {
    if (m_ == 0 || n_ == 0) throw DomainError("transportation problem with an empty side");
    if (cost.rows() != m_ || cost.cols() != n_) {
      throw DomainError("cost matrix shape does not match supply and demand");
    }
    budget_ = options.pivot_budget ? options.pivot_budget : 10 * m_ * n_;
    if constexpr (!ScalarTraits<T>::exact) {
      double scale = 1.0;
      for (const auto& c : cost.data()) scale = std::max(scale, std::fabs(c));
      eps_ = 1e-13 * scale;
    }
  }

  TransportationSolution<T> run() {
    north_west_corner();
    std::size_t pivots = 0;
    for (;;) {
      compute_potentials();
      auto entering = find_entering();
      if (!entering) break;
      if (pivots >= budget_) {
        T current(0);
        for (std::size_t i = 0; i < m_; ++i) {
          for (std::size_t j = 0; j < n_; ++j) current += flow_(i, j) * cost_(i, j);
        }
        throw NumericalError("transportation simplex exceeded its pivot budget of " +
                             std::to_string(budget_) + " (m=" + std::to_string(m_) +
                             ", n=" + std::to_string(n_) +
                             ", current cost=" + scalar::to_string(current) + ")");
      }
      pivot(entering->first, entering->second);
      ++pivots;
    }
    TransportationSolution<T> out;
    out.flow = flow_;
    out.u = u_;
    out.v = v_;
    out.basis = basis_;
    out.pivots = pivots;
    return out;
  }

 private:
  std::size_t cell(std::size_t i, std::size_t j) const { return i * n_ + j; }

  void add_basic(std::size_t i, std::size_t j) {
    basis_.emplace_back(i, j);
    is_basic_[cell(i, j)] = 1;
  }

  void north_west_corner() {
    std::vector<T> a = supply_;
    std::vector<T> b = demand_;
    std::size_t i = 0, j = 0;
    for (;;) {
      T x = std::min<T>(a[i], b[j]);
      if (x < T(0)) x = T(0);
      flow_(i, j) = x;
      a[i] -= x;
      b[j] -= x;
      add_basic(i, j);
      if (i == m_ - 1 && j == n_ - 1) break;
      if (i == m_ - 1) {
        ++j;
      } else if (j == n_ - 1) {
        ++i;
      } else if (a[i] <= b[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // Nodes 0..m-1 are rows, m..m+n-1 are columns.
  void build_adjacency() {
    adjacency_.assign(m_ + n_, {});
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      auto [i, j] = basis_[e];
      adjacency_[i].push_back({m_ + j, e});
      adjacency_[m_ + j].push_back({i, e});
    }
  }

  void compute_potentials() {
    build_adjacency();
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    u_[0] = T(0);
    std::size_t visited = 1;
    while (!stack.empty()) {
      std::size_t node = stack.back();
      stack.pop_back();
      for (auto [next, e] : adjacency_[node]) {
        if (seen[next]) continue;
        seen[next] = 1;
        ++visited;
        auto [i, j] = basis_[e];
        if (next >= m_) {
          v_[j] = cost_(i, j) - u_[i];
        } else {
          u_[i] = cost_(i, j) - v_[j];
        }
        stack.push_back(next);
      }
    }
    if (visited != m_ + n_) throw NumericalError("transportation basis is not a spanning tree");
  }

  std::optional<std::pair<std::size_t, std::size_t>> find_entering() const {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[cell(i, j)]) continue;
        T reduced = cost_(i, j) - u_[i] - v_[j];
        if constexpr (ScalarTraits<T>::exact) {
          if (reduced < 0) return std::make_pair(i, j);
        } else {
          if (reduced < -eps_) return std::make_pair(i, j);
        }
      }
    }
    return std::nullopt;
  }

  void pivot(std::size_t ei, std::size_t ej) {
    // Tree path from column node ej back to row node ei.
    std::vector<std::size_t> parent_edge(m_ + n_, basis_.size());
    std::vector<std::size_t> parent(m_ + n_, m_ + n_);
    std::vector<std::size_t> stack{ei};
    parent[ei] = ei;
    while (!stack.empty()) {
      std::size_t node = stack.back();
      stack.pop_back();
      for (auto [next, e] : adjacency_[node]) {
        if (parent[next] != m_ + n_) continue;
        parent[next] = node;
        parent_edge[next] = e;
        stack.push_back(next);
      }
    }
    std::vector<std::size_t> path;
    for (std::size_t node = m_ + ej; node != ei; node = parent[node]) {
      path.push_back(parent_edge[node]);
    }
    // path[0] touches column ej and gives up flow; signs alternate from there.
    std::optional<T> theta;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      auto [i, j] = basis_[path[k]];
      if (!theta || flow_(i, j) < *theta) theta = flow_(i, j);
    }
    std::size_t leaving = basis_.size();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      auto [i, j] = basis_[path[k]];
      if (flow_(i, j) == *theta &&
          (leaving == basis_.size() ||
           cell(i, j) < cell(basis_[leaving].first, basis_[leaving].second))) {
        leaving = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      auto [i, j] = basis_[path[k]];
      if (k % 2 == 0) {
        flow_(i, j) -= *theta;
      } else {
        flow_(i, j) += *theta;
      }
    }
    auto [li, lj] = basis_[leaving];
    flow_(li, lj) = T(0);
    is_basic_[cell(li, lj)] = 0;
    flow_(ei, ej) = *theta;
    is_basic_[cell(ei, ej)] = 1;
    basis_[leaving] = {ei, ej};
  }

  const Matrix<T>& cost_;
  const std::vector<T>& supply_;
  const std::vector<T>& demand_;
  std::size_t m_;
  std::size_t n_;
  Matrix<T> flow_;
  std::vector<char> is_basic_;
  std::vector<std::pair<std::size_t, std::size_t>> basis_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
  std::vector<T> u_;
  std::vector<T> v_;
  std::size_t budget_ = 0;
  double eps_ = 0.0;
};

}  // namespace detail

/// Minimizes `sum c_ij x_ij` subject to row sums `supply`, column sums `demand`.
template <Scalar T>
TransportationSolution<T> solve_transportation(const Matrix<T>& cost,
                                               const std::vector<T>& supply,
                                               const std::vector<T>& demand,
                                               const SolverOptions& options = {}) {
  return detail::TransportationSimplex<T>(cost, supply, demand, options).run();
}

template <Scalar T>
struct DualPotentials {
  /// One value per atom of the first marginal.
  std::vector<T> u;
  /// One value per atom of the second marginal.
  std::vector<T> v;
};

template <Scalar T>
struct TransportResult {
  Exponent p{1};
  /// `sum gamma_ij d_ij^p`.
  T powered_cost{0};
  /// `powered_cost^(1/p)`, the p-Wasserstein distance.
  double cost = 0.0;
  Coupling<T> coupling;
  std::optional<DualPotentials<T>> duals;
  /// Primal and dual feasible with a duality gap within tolerance.
  bool certified = false;
  T duality_gap{0};
  std::size_t pivots = 0;
};

/**
 * Optimality certificate for a transportation solution: primal feasibility,
 * dual feasibility `u_i + v_j <= c_ij`, complementary slackness on the
 * support, and a duality gap within `tol * (1 + |cost|)`.
 */
template <Scalar T>
bool certify(const Matrix<T>& cost, const Matrix<T>& flow, const std::vector<T>& supply,
             const std::vector<T>& demand, const std::vector<T>& u, const std::vector<T>& v,
             double tol, T* gap_out = nullptr) {
  const std::size_t m = supply.size(), n = demand.size();
  T primal(0), dual(0);
  bool ok = true;
  for (std::size_t i = 0; i < m; ++i) {
    T row(0);
    for (std::size_t j = 0; j < n; ++j) {
      const T& x = flow(i, j);
      if (x < T(0)) ok = false;
      row += x;
      primal += x * cost(i, j);
      T slack = cost(i, j) - u[i] - v[j];
      if (!scalar::leq(T(0), slack, tol)) ok = false;
      if (x > T(0) && !scalar::is_zero(slack, tol)) ok = false;
    }
    if (!scalar::approx_equal(row, supply[i], tol)) ok = false;
    dual += u[i] * supply[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    T col(0);
    for (std::size_t i = 0; i < m; ++i) col += flow(i, j);
    if (!scalar::approx_equal(col, demand[j], tol)) ok = false;
    dual += v[j] * demand[j];
  }
  T gap = scalar::abs(T(primal - dual));
  if (gap_out) *gap_out = gap;
  const double scale = 1.0 + std::fabs(scalar::to_double(primal));
  if (!scalar::is_zero(gap, tol * scale)) ok = false;
  return ok;
}

/**
 * p-Wasserstein distance between two measures on the same space, with an
 * optimal coupling, dual potentials and an optimality certificate.
 */
template <Scalar T>
TransportResult<T> solve_wasserstein(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                                     Exponent p = Exponent(1), const SolverOptions& options = {}) {
  if (!same_space(mu.space(), nu.space())) {
    throw KindMismatchError("solve_wasserstein: measures live on different spaces");
  }
  if (p < Exponent(1)) throw DomainError("solve_wasserstein: p must be >= 1");
  const auto& space = *mu.space();
  Matrix<T> cost = cost_matrix(space, mu, nu, p);
  std::vector<T> a, b;
  a.reserve(mu.size());
  b.reserve(nu.size());
  for (const auto& at : mu.atoms()) a.push_back(at.mass);
  for (const auto& at : nu.atoms()) b.push_back(at.mass);

  auto sol = solve_transportation(cost, a, b, options);
  T powered(0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      if (!(sol.flow(i, j) == T(0))) powered += sol.flow(i, j) * cost(i, j);
    }
  }
  T gap(0);
  bool ok = certify(cost, sol.flow, a, b, sol.u, sol.v, options.tol, &gap);

  TransportResult<T> out{p,
                         powered,
                         0.0,
                         Coupling<T>(mu, nu, std::move(sol.flow), options.tol),
                         DualPotentials<T>{std::move(sol.u), std::move(sol.v)},
                         ok,
                         gap,
                         sol.pivots};
  const double pc = std::max(0.0, scalar::to_double(powered));
  out.cost = p == Exponent(1) ? pc : std::pow(pc, 1.0 / p.value());
  return out;
}

/// W_1 as a scalar of the measure's own type (exact in rational mode).
template <Scalar T>
T w1(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
     const SolverOptions& options = {}) {
  return solve_wasserstein(mu, nu, Exponent(1), options).powered_cost;
}

/// W_p as a double.
template <Scalar T>
double wasserstein_distance(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                            Exponent p = Exponent(1), const SolverOptions& options = {}) {
  return solve_wasserstein(mu, nu, p, options).cost;
}

}  // namespace wiso

#endif  // WISO_TRANSPORT_HPP_
