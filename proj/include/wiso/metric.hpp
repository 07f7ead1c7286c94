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
 * @file metric.hpp
 *
 * @brief Metric spaces over tagged points.
 *
 * Four variants are supported: the snowflaked unit interval `|t - t'|^alpha`,
 * Euclidean space, finite metric tables, and the product
 * `[0,1] x X` with `d((t,x),(t',x')) = (|t-t'|^(alpha q) + d_X(x,x')^q)^(1/q)`.
 *
 * Distances are always produced as powers `d^e` through `powered_distance`.
 * The root is taken only when `e` asks for it, so exact mode stays rational
 * whenever the requested power is.
 */

#ifndef WISO_METRIC_HPP_
#define WISO_METRIC_HPP_

#include <algorithm>
#include <cstddef>
#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wiso/error.hpp"
#include "wiso/point.hpp"
#include "wiso/scalar.hpp"

namespace wiso {

enum class SpaceKind { Interval, Euclidean, Finite, Product };

template <Scalar T>
class MetricSpace;

template <Scalar T>
using SpacePtr = std::shared_ptr<const MetricSpace<T>>;

/// Largest finite metric table accepted; validation is cubic in n.
inline constexpr std::size_t kMaxFiniteSize = 256;

template <Scalar T>
class MetricSpace {
  struct Token {};

 public:
  MetricSpace(Token, SpaceKind kind) : kind_(kind) {}

  /// `[0,1]` with `|t - t'|^alpha`, alpha in (0,1].
  static SpacePtr<T> interval(Exponent alpha = Exponent(1)) {
    check_alpha(alpha);
    auto s = std::make_shared<MetricSpace>(Token{}, SpaceKind::Interval);
    s->alpha_ = alpha;
    return s;
  }

  static SpacePtr<T> euclidean(std::size_t dim) {
    if (dim == 0) throw DomainError("Euclidean dimension must be positive");
    auto s = std::make_shared<MetricSpace>(Token{}, SpaceKind::Euclidean);
    s->dim_ = dim;
    return s;
  }

  /**
   * Finite metric given by a row-major n x n table. Checks zero diagonal,
   * symmetry, positivity off the diagonal and every triangle inequality.
   */
  static SpacePtr<T> finite(std::vector<T> matrix, std::size_t n,
                            double tol = kDefaultTol, std::string source = {}) {
    if (n == 0) throw DomainError("finite space needs at least one point");
    if (n > kMaxFiniteSize) {
      throw DomainError("finite space larger than " + std::to_string(kMaxFiniteSize));
    }
    if (matrix.size() != n * n) throw DomainError("finite metric table is not n x n");
    auto at = [&](std::size_t i, std::size_t j) -> const T& { return matrix[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
      if (!(at(i, i) == T(0))) throw DomainError("finite metric: non-zero diagonal");
      for (std::size_t j = 0; j < n; ++j) {
        if (!(at(i, j) == at(j, i))) throw DomainError("finite metric: not symmetric");
        if (i != j && !(at(i, j) > T(0))) {
          throw DomainError("finite metric: off-diagonal entry not positive");
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          T via = at(i, j) + at(j, k);
          if (!scalar::leq(at(i, k), via, tol)) {
            throw DomainError("finite metric: triangle inequality fails for (" +
                              std::to_string(i) + ", " + std::to_string(j) + ", " +
                              std::to_string(k) + ")");
          }
        }
      }
    }
    auto s = std::make_shared<MetricSpace>(Token{}, SpaceKind::Finite);
    s->n_ = n;
    s->matrix_ = std::move(matrix);
    s->source_ = std::move(source);
    return s;
  }

  /// `[0,1] x base` with the snowflaked l^q product metric.
  static SpacePtr<T> product(Exponent alpha, Exponent q, SpacePtr<T> base) {
    check_alpha(alpha);
    if (q < Exponent(1)) throw DomainError("product exponent q must be >= 1");
    if (!base) throw DomainError("product space needs a base space");
    auto s = std::make_shared<MetricSpace>(Token{}, SpaceKind::Product);
    s->alpha_ = alpha;
    s->q_ = q;
    s->base_ = std::move(base);
    return s;
  }

  SpaceKind kind() const { return kind_; }
  Exponent alpha() const { return alpha_; }
  Exponent q() const { return q_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return n_; }
  const SpacePtr<T>& base() const { return base_; }
  const T& entry(std::size_t i, std::size_t j) const { return matrix_[i * n_ + j]; }

  bool contains(const Point<T>& p) const {
    switch (kind_) {
      case SpaceKind::Interval: {
        auto* ip = p.template get_if<IntervalPoint<T>>();
        return ip && ip->t >= T(0) && ip->t <= T(1);
      }
      case SpaceKind::Euclidean: {
        auto* ep = p.template get_if<EuclideanPoint<T>>();
        return ep && ep->coords.size() == dim_;
      }
      case SpaceKind::Finite: {
        auto* fp = p.template get_if<FinitePoint>();
        return fp && fp->index < n_;
      }
      case SpaceKind::Product: {
        auto* pp = p.template get_if<ProductPoint<T>>();
        return pp && pp->t >= T(0) && pp->t <= T(1) && base_->contains(*pp->x);
      }
    }
    return false;
  }

  void require(const Point<T>& p) const {
    if (!contains(p)) {
      throw KindMismatchError("point " + p.str() + " does not belong to space " + spec());
    }
  }

  /// d(a, b)^e. Points are assumed valid; use `require` at API boundaries.
  T powered_distance(const Point<T>& a, const Point<T>& b, Exponent e) const {
    switch (kind_) {
      case SpaceKind::Interval: {
        T dt = scalar::abs(T(a.t() - b.t()));
        return scalar::power(dt, alpha_ * e);
      }
      case SpaceKind::Euclidean: {
        const auto& x = a.coords();
        const auto& y = b.coords();
        T sq(0);
        for (std::size_t i = 0; i < x.size(); ++i) {
          T diff = x[i] - y[i];
          sq += diff * diff;
        }
        return scalar::power(sq, e / Exponent(2));
      }
      case SpaceKind::Finite:
        return scalar::power(entry(a.index(), b.index()), e);
      case SpaceKind::Product: {
        T dt = scalar::abs(T(a.t() - b.t()));
        T inner = scalar::power(dt, alpha_ * q_) +
                  base_->powered_distance(a.base(), b.base(), q_);
        return scalar::power(inner, e / q_);
      }
    }
    return T(0);
  }

  T distance(const Point<T>& a, const Point<T>& b) const {
    return powered_distance(a, b, Exponent(1));
  }

  /// Textual identifier, e.g. `product:1/2:2:euclidean:2`.
  std::string spec() const {
    switch (kind_) {
      case SpaceKind::Interval:
        return "interval:" + alpha_.str();
      case SpaceKind::Euclidean:
        return "euclidean:" + std::to_string(dim_);
      case SpaceKind::Finite:
        return "finite:" + (source_.empty() ? std::to_string(n_) : source_);
      case SpaceKind::Product:
        return "product:" + alpha_.str() + ":" + q_.str() + ":" + base_->spec();
    }
    return {};
  }

  friend bool operator==(const MetricSpace& a, const MetricSpace& b) {
    if (&a == &b) return true;
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case SpaceKind::Interval:
        return a.alpha_ == b.alpha_;
      case SpaceKind::Euclidean:
        return a.dim_ == b.dim_;
      case SpaceKind::Finite:
        return a.n_ == b.n_ && a.matrix_ == b.matrix_;
      case SpaceKind::Product:
        return a.alpha_ == b.alpha_ && a.q_ == b.q_ && *a.base_ == *b.base_;
    }
    return false;
  }

 private:
  static void check_alpha(Exponent alpha) {
    if (Exponent(1) < alpha) throw DomainError("snowflake exponent alpha must be in (0,1]");
  }

  SpaceKind kind_;
  Exponent alpha_{1};
  Exponent q_{1};
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  std::vector<T> matrix_;
  std::string source_;
  SpacePtr<T> base_;
};

template <Scalar T>
bool same_space(const SpacePtr<T>& a, const SpacePtr<T>& b) {
  return a == b || (a && b && *a == *b);
}

/// Validated distance between two points of `space`.
template <Scalar T>
T distance(const MetricSpace<T>& space, const Point<T>& a, const Point<T>& b) {
  space.require(a);
  space.require(b);
  return space.distance(a, b);
}

/**
 * `d(a,b) + d(b,c) - d(a,c)`. Float round-off below `tol` is clamped to 0;
 * a larger negative value means the space is not a metric and is returned
 * unclamped so property checks can see it.
 */
template <Scalar T>
T triangle_defect(const MetricSpace<T>& space, const Point<T>& a, const Point<T>& b,
                  const Point<T>& c, double tol = kDefaultTol) {
  space.require(a);
  space.require(b);
  space.require(c);
  T defect = space.distance(a, b) + space.distance(b, c) - space.distance(a, c);
  if constexpr (!ScalarTraits<T>::exact) {
    if (defect < 0 && defect >= -tol) defect = 0;
  }
  return defect;
}

/**
 * Points of `candidates` lying on the metric segment between `a` and `b`,
 * i.e. with `|d(a,w) + d(w,b) - d(a,b)| <= tol`. The endpoints are always
 * part of the result.
 */
template <Scalar T>
std::vector<Point<T>> metric_segment(const MetricSpace<T>& space, const Point<T>& a,
                                     const Point<T>& b,
                                     const std::vector<Point<T>>& candidates,
                                     double tol = kDefaultTol) {
  if (candidates.empty()) throw DomainError("metric_segment: empty candidate list");
  space.require(a);
  space.require(b);
  const T dab = space.distance(a, b);
  std::vector<Point<T>> out;
  bool has_a = false;
  bool has_b = false;
  for (const auto& w : candidates) {
    space.require(w);
    T gap = space.distance(a, w) + space.distance(w, b) - dab;
    if (scalar::is_zero(gap, tol)) {
      has_a = has_a || w == a;
      has_b = has_b || w == b;
      out.push_back(w);
    }
  }
  if (!has_a) out.insert(out.begin(), a);
  if (!has_b && !(a == b)) out.push_back(b);
  return out;
}

/**
 * True when the segment between `a` and `b` is known to consist of the two
 * endpoints only: a product space with alpha < 1 and q > 1 whose points have
 * different fiber coordinates. With q = 1 the l^1 sum can be saturated
 * through a point sharing one endpoint's fiber coordinate, so no certificate
 * is given there.
 */
template <Scalar T>
bool segment_is_endpoints_only(const MetricSpace<T>& space, const Point<T>& a,
                               const Point<T>& b) {
  if (space.kind() != SpaceKind::Product) return false;
  if (!(space.alpha() < Exponent(1)) || !(Exponent(1) < space.q())) return false;
  space.require(a);
  space.require(b);
  return !(a.t() == b.t());
}

/**
 * Reads a finite metric table: first line `n`, then n lines of n numbers.
 * Entries may be decimals or `p/q`.
 */
template <Scalar T>
SpacePtr<T> parse_finite_space(std::istream& in, double tol = kDefaultTol,
                               std::string source = {}) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto tokens = [](const std::string& l) {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t i = 0;
    while (i < l.size()) {
      while (i < l.size() && (l[i] == ' ' || l[i] == '\t' || l[i] == '\r')) ++i;
      if (i >= l.size()) break;
      std::size_t start = i;
      while (i < l.size() && l[i] != ' ' && l[i] != '\t' && l[i] != '\r') ++i;
      out.emplace_back(l.substr(start, i - start), start + 1);
    }
    return out;
  };

  if (!next_line()) throw ParseError("finite space: missing size line", 1, 1);
  auto head = tokens(line);
  std::size_t n = 0;
  {
    auto r = parse_rational(head.at(0).first);
    if (head.size() != 1 || !r || r->get_den() != 1 || *r <= 0 ||
        !r->get_num().fits_ulong_p()) {
      throw ParseError("finite space: expected a positive integer size", line_no, 1);
    }
    n = r->get_num().get_ui();
  }
  if (n > kMaxFiniteSize) {
    throw ParseError("finite space: size exceeds " + std::to_string(kMaxFiniteSize),
                     line_no, 1);
  }
  std::vector<T> matrix;
  matrix.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!next_line()) throw ParseError("finite space: missing matrix row", line_no + 1, 1);
    auto row = tokens(line);
    if (row.size() != n) {
      throw ParseError("finite space: expected " + std::to_string(n) + " entries", line_no,
                       1);
    }
    for (const auto& [tok, col] : row) {
      auto v = scalar::parse<T>(tok);
      if (!v) throw ParseError("finite space: bad number '" + tok + "'", line_no, col);
      matrix.push_back(*v);
    }
  }
  try {
    return MetricSpace<T>::finite(std::move(matrix), n, tol, std::move(source));
  } catch (const DomainError& e) {
    throw ParseError(e.what(), 0, 0);
  }
}

}  // namespace wiso

#endif  // WISO_METRIC_HPP_
