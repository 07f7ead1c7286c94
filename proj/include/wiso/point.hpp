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

#ifndef WISO_POINT_HPP_
#define WISO_POINT_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wiso/scalar.hpp"

namespace wiso {

enum class PointKind { Interval, Euclidean, Finite, Product };

template <Scalar T>
class Point;

template <Scalar T>
struct IntervalPoint {
  T t;
};

template <Scalar T>
struct EuclideanPoint {
  std::vector<T> coords;
};

struct FinitePoint {
  std::size_t index;
};

/// (t, x) with t in [0,1] and x a point of the base space.
template <Scalar T>
struct ProductPoint {
  T t;
  std::shared_ptr<const Point<T>> x;
};

/**
 * Immutable tagged point. Ordering is lexicographic on (kind, fields) and
 * equality is exact, so canonical measure forms never depend on tolerances.
 */
template <Scalar T>
class Point {
 public:
  using Variant = std::variant<IntervalPoint<T>, EuclideanPoint<T>, FinitePoint,
                               ProductPoint<T>>;

  static Point interval(T t) { return Point(IntervalPoint<T>{std::move(t)}); }
  static Point euclidean(std::vector<T> coords) {
    return Point(EuclideanPoint<T>{std::move(coords)});
  }
  static Point finite(std::size_t index) { return Point(FinitePoint{index}); }
  static Point product(T t, Point x) {
    return Point(ProductPoint<T>{std::move(t),
                                 std::make_shared<const Point>(std::move(x))});
  }

  PointKind kind() const { return static_cast<PointKind>(value_.index()); }
  const Variant& value() const { return value_; }

  template <typename Alt>
  const Alt* get_if() const {
    return std::get_if<Alt>(&value_);
  }

  /// Fiber coordinate; only valid for interval and product points.
  const T& t() const {
    if (auto* p = get_if<IntervalPoint<T>>()) return p->t;
    if (auto* p = get_if<ProductPoint<T>>()) return p->t;
    throw KindMismatchError("point has no fiber coordinate");
  }

  /// Base-space component of a product point.
  const Point& base() const {
    if (auto* p = get_if<ProductPoint<T>>()) return *p->x;
    throw KindMismatchError("point is not a product point");
  }

  const std::vector<T>& coords() const {
    if (auto* p = get_if<EuclideanPoint<T>>()) return p->coords;
    throw KindMismatchError("point is not a Euclidean point");
  }

  std::size_t index() const {
    if (auto* p = get_if<FinitePoint>()) return p->index;
    throw KindMismatchError("point is not a finite-space point");
  }

  /// Same point with its fiber coordinate replaced.
  Point with_t(T t) const {
    if (get_if<IntervalPoint<T>>()) return interval(std::move(t));
    if (auto* p = get_if<ProductPoint<T>>()) {
      return Point(ProductPoint<T>{std::move(t), p->x});
    }
    throw KindMismatchError("point has no fiber coordinate");
  }

  /// Three-way comparison returning <0, 0, >0.
  friend int compare(const Point& a, const Point& b) {
    if (a.value_.index() != b.value_.index()) {
      return a.value_.index() < b.value_.index() ? -1 : 1;
    }
    auto cmp_scalar = [](const T& x, const T& y) { return x < y ? -1 : (y < x ? 1 : 0); };
    switch (a.kind()) {
      case PointKind::Interval:
        return cmp_scalar(a.t(), b.t());
      case PointKind::Euclidean: {
        const auto& x = a.coords();
        const auto& y = b.coords();
        for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
          if (int c = cmp_scalar(x[i], y[i])) return c;
        }
        return x.size() == y.size() ? 0 : (x.size() < y.size() ? -1 : 1);
      }
      case PointKind::Finite:
        return a.index() == b.index() ? 0 : (a.index() < b.index() ? -1 : 1);
      case PointKind::Product:
        if (int c = cmp_scalar(a.t(), b.t())) return c;
        return compare(a.base(), b.base());
    }
    return 0;
  }

  friend bool operator==(const Point& a, const Point& b) { return compare(a, b) == 0; }
  friend bool operator<(const Point& a, const Point& b) { return compare(a, b) < 0; }

  /// Human-readable form, e.g. `(0.5, [1, 2])`.
  std::string str() const {
    switch (kind()) {
      case PointKind::Interval:
        return scalar::to_string(t());
      case PointKind::Euclidean: {
        std::string s = "[";
        for (std::size_t i = 0; i < coords().size(); ++i) {
          if (i) s += ", ";
          s += scalar::to_string(coords()[i]);
        }
        return s + "]";
      }
      case PointKind::Finite:
        return "#" + std::to_string(index());
      case PointKind::Product:
        return "(" + scalar::to_string(t()) + ", " + base().str() + ")";
    }
    return {};
  }

 private:
  explicit Point(Variant v) : value_(std::move(v)) {}

  Variant value_;
};

/// Coordinate-wise comparison with slack `tol` (exact in rational mode).
template <Scalar T>
bool approx_equal(const Point<T>& a, const Point<T>& b, double tol) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case PointKind::Interval:
      return scalar::approx_equal(a.t(), b.t(), tol);
    case PointKind::Euclidean: {
      if (a.coords().size() != b.coords().size()) return false;
      for (std::size_t i = 0; i < a.coords().size(); ++i) {
        if (!scalar::approx_equal(a.coords()[i], b.coords()[i], tol)) return false;
      }
      return true;
    }
    case PointKind::Finite:
      return a.index() == b.index();
    case PointKind::Product:
      return scalar::approx_equal(a.t(), b.t(), tol) &&
             approx_equal(a.base(), b.base(), tol);
  }
  return false;
}

}  // namespace wiso

#endif  // WISO_POINT_HPP_
