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

#ifndef WISO_COUPLING_HPP_
#define WISO_COUPLING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wiso/error.hpp"
#include "wiso/measure.hpp"
#include "wiso/metric.hpp"
#include "wiso/scalar.hpp"

namespace wiso {

/// Dense row-major matrix.
template <Scalar T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
struct Triplet {
  std::size_t row;
  std::size_t col;
  T weight;
};

/**
 * Transport plan between two measures: a nonnegative matrix indexed by the
 * atoms of `rows()` and `cols()` whose row sums are the masses of the first
 * marginal and whose column sums are those of the second.
 */
template <Scalar T>
class Coupling {
 public:
  struct Unchecked {};

  Coupling(DiscreteMeasure<T> rows, DiscreteMeasure<T> cols, Matrix<T> weights,
           double tol = kDefaultTol)
      : Coupling(Unchecked{}, std::move(rows), std::move(cols), std::move(weights)) {
    validate(tol);
  }

  /// Skips the marginal check; `validate` can be called later.
  Coupling(Unchecked, DiscreteMeasure<T> rows, DiscreteMeasure<T> cols, Matrix<T> weights)
      : rows_(std::move(rows)), cols_(std::move(cols)), weights_(std::move(weights)) {
    if (weights_.rows() != rows_.size() || weights_.cols() != cols_.size()) {
      throw DomainError("coupling matrix shape does not match its marginals");
    }
  }

  /// The independent coupling mu (x) nu.
  static Coupling product(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
    Matrix<T> w(mu.size(), nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      for (std::size_t j = 0; j < nu.size(); ++j) w(i, j) = mu[i].mass * nu[j].mass;
    }
    return Coupling(mu, nu, std::move(w));
  }

  /// (Id x Id)# mu.
  static Coupling diagonal(const DiscreteMeasure<T>& mu) {
    Matrix<T> w(mu.size(), mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) w(i, i) = mu[i].mass;
    return Coupling(mu, mu, std::move(w));
  }

  const DiscreteMeasure<T>& rows() const { return rows_; }
  const DiscreteMeasure<T>& cols() const { return cols_; }
  const Matrix<T>& weights() const { return weights_; }
  const T& weight(std::size_t i, std::size_t j) const { return weights_(i, j); }
  std::size_t m() const { return rows_.size(); }
  std::size_t n() const { return cols_.size(); }

  /// Nonzero entries in row-major order.
  std::vector<Triplet<T>> triplets() const {
    std::vector<Triplet<T>> out;
    for (std::size_t i = 0; i < m(); ++i) {
      for (std::size_t j = 0; j < n(); ++j) {
        if (!(weights_(i, j) == T(0))) out.push_back({i, j, weights_(i, j)});
      }
    }
    return out;
  }

  /// Throws DomainError if an entry is negative or a marginal is off.
  void validate(double tol = kDefaultTol) const {
    for (std::size_t i = 0; i < m(); ++i) {
      T sum(0);
      for (std::size_t j = 0; j < n(); ++j) {
        if (weights_(i, j) < T(0)) throw DomainError("coupling has a negative entry");
        sum += weights_(i, j);
      }
      if (!scalar::approx_equal(sum, rows_[i].mass, tol)) {
        throw DomainError("coupling row " + std::to_string(i) + " sums to " +
                          scalar::to_string(sum) + ", expected " +
                          scalar::to_string(rows_[i].mass));
      }
    }
    for (std::size_t j = 0; j < n(); ++j) {
      T sum(0);
      for (std::size_t i = 0; i < m(); ++i) sum += weights_(i, j);
      if (!scalar::approx_equal(sum, cols_[j].mass, tol)) {
        throw DomainError("coupling column " + std::to_string(j) + " sums to " +
                          scalar::to_string(sum) + ", expected " +
                          scalar::to_string(cols_[j].mass));
      }
    }
  }

 private:
  DiscreteMeasure<T> rows_;
  DiscreteMeasure<T> cols_;
  Matrix<T> weights_;
};

/// `c_ij = d(x_i, y_j)^p` over the supports of `mu` (rows) and `nu` (cols).
template <Scalar T>
Matrix<T> cost_matrix(const MetricSpace<T>& space, const DiscreteMeasure<T>& mu,
                      const DiscreteMeasure<T>& nu, Exponent p) {
  Matrix<T> c(mu.size(), nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      c(i, j) = space.powered_distance(mu[i].point, nu[j].point, p);
    }
  }
  return c;
}

/// Powered cost `sum gamma_ij d(x_i, y_j)^p`; the caller takes the 1/p root.
template <Scalar T>
T coupling_cost(const Coupling<T>& pi, const MetricSpace<T>& space, Exponent p,
                double tol = kDefaultTol) {
  pi.validate(tol);
  if (!(space == *pi.rows().space()) || !(space == *pi.cols().space())) {
    throw KindMismatchError("coupling_cost: coupling marginals are not on this space");
  }
  T total(0);
  for (std::size_t i = 0; i < pi.m(); ++i) {
    for (std::size_t j = 0; j < pi.n(); ++j) {
      const T& w = pi.weight(i, j);
      if (w == T(0)) continue;
      total += w * space.powered_distance(pi.rows()[i].point, pi.cols()[j].point, p);
    }
  }
  return total;
}

template <Scalar T>
struct RestrictedCoupling {
  T lambda;
  Coupling<T> coupling;
};

enum class Side { Row, Col };

/**
 * `lambda = pi(S x Z)` (or `pi(Z x S)` for `Side::Col`) and the coupling
 * `pi|_{S x Z} / lambda`, whose marginals are the renormalized restriction
 * of the chosen side and the pushed-forward other side.
 */
template <Scalar T>
RestrictedCoupling<T> restrict_and_renormalize(const Coupling<T>& pi,
                                               const std::vector<Point<T>>& set, Side side) {
  const auto& chosen = side == Side::Row ? pi.rows() : pi.cols();
  const auto& other = side == Side::Row ? pi.cols() : pi.rows();
  std::vector<std::size_t> keep;
  T lambda(0);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (std::find(set.begin(), set.end(), chosen[i].point) != set.end()) {
      keep.push_back(i);
      lambda += chosen[i].mass;
    }
  }
  if (!(lambda > T(0))) throw DomainError("restrict_and_renormalize: set carries no mass");

  auto w = [&](std::size_t k, std::size_t o) -> const T& {
    return side == Side::Row ? pi.weight(k, o) : pi.weight(o, k);
  };
  std::vector<Atom<T>> chosen_atoms;
  for (std::size_t k : keep) chosen_atoms.push_back({chosen[k].point, T(chosen[k].mass / lambda)});
  std::vector<std::size_t> other_keep;
  std::vector<Atom<T>> other_atoms;
  for (std::size_t o = 0; o < other.size(); ++o) {
    T sum(0);
    for (std::size_t k : keep) sum += w(k, o);
    if (sum > T(0)) {
      other_keep.push_back(o);
      other_atoms.push_back({other[o].point, T(sum / lambda)});
    }
  }
  DiscreteMeasure<T> chosen_m(chosen.space(), std::move(chosen_atoms));
  DiscreteMeasure<T> other_m(other.space(), std::move(other_atoms));

  // Canonical order is preserved by the filtering above, so indices line up.
  Matrix<T> sub(side == Side::Row ? keep.size() : other_keep.size(),
                side == Side::Row ? other_keep.size() : keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = 0; b < other_keep.size(); ++b) {
      T v = w(keep[a], other_keep[b]) / lambda;
      if (side == Side::Row) {
        sub(a, b) = v;
      } else {
        sub(b, a) = v;
      }
    }
  }
  if (side == Side::Row) {
    return {lambda, Coupling<T>(std::move(chosen_m), std::move(other_m), std::move(sub))};
  }
  return {lambda, Coupling<T>(std::move(other_m), std::move(chosen_m), std::move(sub))};
}

template <Scalar T>
struct MonotonicityReport {
  bool monotone = true;
  /// Cells (i, j) of the violating cycle; empty when monotone.
  std::vector<std::pair<std::size_t, std::size_t>> witness;
  /// Cost saved by reassigning along the witness.
  T saving{0};
};

/**
 * Checks c-cyclical monotonicity of the support of `pi` for `c = d^p` over
 * every cycle of at most `max_cycle` distinct support cells. A cycle
 * (x_1,y_1),...,(x_k,y_k) violates it if reassigning x_l to y_{l+1} is
 * cheaper by more than `tol`.
 */
template <Scalar T>
MonotonicityReport<T> check_cyclical_monotonicity(const Coupling<T>& pi,
                                                  const MetricSpace<T>& space, Exponent p,
                                                  std::size_t max_cycle,
                                                  double tol = kDefaultTol,
                                                  double budget = 5e7) {
  if (max_cycle < 2) throw DomainError("check_cyclical_monotonicity: max_cycle must be >= 2");
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (const auto& t : pi.triplets()) cells.emplace_back(t.row, t.col);
  const std::size_t k_max = std::min(max_cycle, cells.size());
  if (std::pow(static_cast<double>(cells.size()), static_cast<double>(k_max)) > budget) {
    throw BudgetError("check_cyclical_monotonicity: " + std::to_string(cells.size()) +
                      " support cells ^ " + std::to_string(k_max) + " exceeds budget");
  }
  Matrix<T> c = cost_matrix(space, pi.rows(), pi.cols(), p);

  MonotonicityReport<T> report;
  std::vector<std::size_t> cycle;
  std::vector<bool> used(cells.size(), false);

  // Depth-first over ordered tuples whose first element is the smallest
  // index, which visits every cycle once per rotation class.
  std::function<bool(std::size_t)> extend = [&](std::size_t k) -> bool {
    if (cycle.size() == k) {
      T original(0), swapped(0);
      for (std::size_t l = 0; l < k; ++l) {
        const auto& here = cells[cycle[l]];
        const auto& next = cells[cycle[(l + 1) % k]];
        original += c(here.first, here.second);
        swapped += c(here.first, next.second);
      }
      if (!scalar::leq(original, swapped, tol)) {
        report.monotone = false;
        report.saving = original - swapped;
        for (auto idx : cycle) report.witness.push_back(cells[idx]);
        return true;
      }
      return false;
    }
    for (std::size_t idx = cycle.empty() ? 0 : cycle.front() + 1; idx < cells.size(); ++idx) {
      if (used[idx]) continue;
      used[idx] = true;
      cycle.push_back(idx);
      bool found = extend(k);
      cycle.pop_back();
      used[idx] = false;
      if (found) return true;
      if (cycle.empty() && idx + k > cells.size()) break;
    }
    return false;
  };
  for (std::size_t k = 2; k <= k_max; ++k) {
    if (extend(k)) break;
  }
  return report;
}

}  // namespace wiso

#endif  // WISO_COUPLING_HPP_
