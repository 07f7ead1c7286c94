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

#ifndef WISO_LP_HPP_
#define WISO_LP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "wiso/coupling.hpp"
#include "wiso/error.hpp"
#include "wiso/scalar.hpp"

namespace wiso {

template <Scalar T>
struct LpSolution {
  std::vector<T> x;
  T value{0};
  std::size_t pivots = 0;
};

/**
 * Dense simplex for `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0`, so the
 * slack basis is feasible from the start. Works on the condensed
 * (dictionary) tableau and selects pivots by Bland's rule.
 */
template <Scalar T>
LpSolution<T> maximize_lp(const Matrix<T>& A, const std::vector<T>& b, const std::vector<T>& c,
                          std::size_t pivot_budget = 0) {
  const std::size_t rows = A.rows(), cols = A.cols();
  if (b.size() != rows || c.size() != cols) throw DomainError("maximize_lp: shape mismatch");
  for (const auto& bi : b) {
    if (bi < T(0)) throw DomainError("maximize_lp: right-hand side must be nonnegative");
  }
  Matrix<T> tab = A;
  std::vector<T> rhs = b;
  std::vector<T> obj = c;
  T value(0);
  // Labels 0..cols-1 are decision variables, cols.. are slacks.
  std::vector<std::size_t> nonbasic(cols), basic(rows);
  for (std::size_t j = 0; j < cols; ++j) nonbasic[j] = j;
  for (std::size_t i = 0; i < rows; ++i) basic[i] = cols + i;

  double eps = 0.0;
  if constexpr (!ScalarTraits<T>::exact) {
    double scale = 1.0;
    for (const auto& a : A.data()) scale = std::max(scale, std::fabs(a));
    for (const auto& x : c) scale = std::max(scale, std::fabs(x));
    eps = 1e-12 * scale;
  }
  auto positive = [&](const T& x) {
    if constexpr (ScalarTraits<T>::exact) {
      return x > 0;
    } else {
      return x > eps;
    }
  };

  if (pivot_budget == 0) pivot_budget = 50 * (rows + cols) + 1000;
  std::size_t pivots = 0;
  for (;; ++pivots) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (positive(obj[j]) && (enter == cols || nonbasic[j] < nonbasic[enter])) enter = j;
    }
    if (enter == cols) break;
    if (pivots >= pivot_budget) throw NumericalError("maximize_lp: pivot budget exhausted");

    std::size_t leave = rows;
    T best(0);
    for (std::size_t i = 0; i < rows; ++i) {
      if (!positive(tab(i, enter))) continue;
      T ratio = rhs[i] / tab(i, enter);
      if (leave == rows || ratio < best || (ratio == best && basic[i] < basic[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == rows) throw NumericalError("maximize_lp: objective is unbounded");

    const T piv = tab(leave, enter);
    rhs[leave] /= piv;
    for (std::size_t j = 0; j < cols; ++j) {
      if (j != enter) tab(leave, j) /= piv;
    }
    tab(leave, enter) = T(1) / piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave) continue;
      const T f = tab(i, enter);
      if (f == T(0)) continue;
      rhs[i] -= f * rhs[leave];
      if constexpr (!ScalarTraits<T>::exact) {
        if (rhs[i] < 0 && rhs[i] > -eps) rhs[i] = 0;
      }
      for (std::size_t j = 0; j < cols; ++j) {
        if (j != enter) tab(i, j) -= f * tab(leave, j);
      }
      tab(i, enter) = -f / piv;
    }
    const T d = obj[enter];
    value += d * rhs[leave];
    for (std::size_t j = 0; j < cols; ++j) {
      if (j != enter) obj[j] -= d * tab(leave, j);
    }
    obj[enter] = -d / piv;
    std::swap(basic[leave], nonbasic[enter]);
  }

  LpSolution<T> out;
  out.x.assign(cols, T(0));
  for (std::size_t i = 0; i < rows; ++i) {
    if (basic[i] < cols) out.x[basic[i]] = rhs[i];
  }
  out.value = value;
  out.pivots = pivots;
  return out;
}

}  // namespace wiso

#endif  // WISO_LP_HPP_
