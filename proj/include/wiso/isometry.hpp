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
 * @file isometry.hpp
 *
 * @brief Isometries of W_1([0,1]) and their fiber-wise lifts to
 * `[0,1] x X`.
 *
 * The isometry group of W_1([0,1], |.|) is the Klein four-group generated by
 * the reflection push-forward `R#` (`t -> 1 - t`) and the flip `J`, the map
 * that swaps a measure's distribution function with its quantile function.
 * `J` splits mass: `J(delta_x) = x delta_0 + (1 - x) delta_1`.
 *
 * On a product space the lift `Phi_phi` disintegrates a measure along the
 * base, applies `phi` to every fiber conditional and reassembles. For
 * fiber-injective measures `build_pi_hat` turns any coupling of `mu, nu`
 * into a coupling of `Phi_J mu, Phi_J nu` with the same `d^q` cost under
 * `d_{1/q,q}`.
 */

#ifndef WISO_ISOMETRY_HPP_
#define WISO_ISOMETRY_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wiso/coupling.hpp"
#include "wiso/error.hpp"
#include "wiso/measure.hpp"
#include "wiso/metric.hpp"

namespace wiso {

enum class IntervalIsometry { Identity, Reflect, Flip, FlipReflect };

/// Group law of {Id, R#, J, JR#}; every element is its own inverse.
constexpr IntervalIsometry compose(IntervalIsometry a, IntervalIsometry b) {
  auto bits = [](IntervalIsometry g) {
    switch (g) {
      case IntervalIsometry::Identity: return 0;
      case IntervalIsometry::Reflect: return 1;
      case IntervalIsometry::Flip: return 2;
      case IntervalIsometry::FlipReflect: return 3;
    }
    return 0;
  };
  constexpr IntervalIsometry table[] = {IntervalIsometry::Identity, IntervalIsometry::Reflect,
                                        IntervalIsometry::Flip, IntervalIsometry::FlipReflect};
  return table[bits(a) ^ bits(b)];
}

inline std::string_view isometry_name(IntervalIsometry g) {
  switch (g) {
    case IntervalIsometry::Identity: return "id";
    case IntervalIsometry::Reflect: return "reflect";
    case IntervalIsometry::Flip: return "flip";
    case IntervalIsometry::FlipReflect: return "flip-reflect";
  }
  return "id";
}

inline IntervalIsometry parse_isometry(std::string_view name) {
  if (name == "id") return IntervalIsometry::Identity;
  if (name == "reflect") return IntervalIsometry::Reflect;
  if (name == "flip") return IntervalIsometry::Flip;
  if (name == "flip-reflect") return IntervalIsometry::FlipReflect;
  throw DomainError("unknown isometry '" + std::string(name) +
                    "' (expected id, reflect, flip or flip-reflect)");
}

/**
 * Right-continuous nondecreasing step function on [0,1] with F(1) = 1:
 * `F(t) = 0` below the first breakpoint and `values[k]` on
 * `[breakpoints[k], breakpoints[k+1])`. Both sequences are strictly increasing.
 */
template <Scalar T>
struct StepCDF {
  std::vector<T> breakpoints;
  std::vector<T> values;

  T operator()(const T& t) const {
    T out(0);
    for (std::size_t k = 0; k < breakpoints.size() && breakpoints[k] <= t; ++k) out = values[k];
    return out;
  }

  friend bool operator==(const StepCDF&, const StepCDF&) = default;
};

namespace detail {

template <Scalar T>
void require_interval(const DiscreteMeasure<T>& mu, const char* op) {
  if (mu.space()->kind() != SpaceKind::Interval) {
    throw KindMismatchError(std::string(op) + ": measure is not on the unit interval");
  }
}

/// Appends (b, v) unless v does not increase the running value.
template <Scalar T>
void push_step(StepCDF<T>& f, const T& b, const T& v) {
  const T prev = f.values.empty() ? T(0) : f.values.back();
  if (v > prev) {
    f.breakpoints.push_back(b);
    f.values.push_back(v);
  }
}

}  // namespace detail

/// `F(t) = mu([0, t])`.
template <Scalar T>
StepCDF<T> cdf(const DiscreteMeasure<T>& mu) {
  detail::require_interval(mu, "cdf");
  StepCDF<T> f;
  T acc(0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    acc += mu[i].mass;
    f.breakpoints.push_back(mu[i].point.t());
    f.values.push_back(i + 1 == mu.size() ? T(1) : acc);
  }
  return f;
}

/**
 * `G(s) = inf{t : F(t) > s}` for s in [0,1), with `G(1) = 1`, returned as
 * another step CDF.
 */
template <Scalar T>
StepCDF<T> generalized_inverse(const StepCDF<T>& f) {
  if (f.breakpoints.empty() || f.values.size() != f.breakpoints.size() ||
      !(f.values.back() == T(1))) {
    throw DomainError("generalized_inverse: not a distribution function on [0,1]");
  }
  StepCDF<T> g;
  const std::size_t k = f.breakpoints.size();
  detail::push_step(g, T(0), f.breakpoints[0]);
  for (std::size_t i = 1; i < k; ++i) detail::push_step(g, f.values[i - 1], f.breakpoints[i]);
  detail::push_step(g, T(1), T(1));
  return g;
}

/// The measure whose distribution function is `f`.
template <Scalar T>
DiscreteMeasure<T> measure_from_cdf(const StepCDF<T>& f, SpacePtr<T> interval) {
  std::vector<Atom<T>> atoms;
  T prev(0);
  for (std::size_t k = 0; k < f.breakpoints.size(); ++k) {
    atoms.push_back({Point<T>::interval(f.breakpoints[k]), T(f.values[k] - prev)});
    prev = f.values[k];
  }
  return DiscreteMeasure<T>(std::move(interval), std::move(atoms));
}

/**
 * Closed form of the flip: for atoms t_1 < ... < t_m with cumulative masses
 * A_i, `J(mu) = t_1 delta_0 + sum_i (t_{i+1} - t_i) delta_{A_i} + (1 - t_m) delta_1`.
 */
template <Scalar T>
DiscreteMeasure<T> flip(const DiscreteMeasure<T>& mu) {
  detail::require_interval(mu, "flip");
  const std::size_t m = mu.size();
  std::vector<Atom<T>> atoms;
  atoms.reserve(m + 1);
  atoms.push_back({Point<T>::interval(T(0)), mu[0].point.t()});
  T cumulative(0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    cumulative += mu[i].mass;
    atoms.push_back({Point<T>::interval(cumulative), T(mu[i + 1].point.t() - mu[i].point.t())});
  }
  atoms.push_back({Point<T>::interval(T(1)), T(T(1) - mu[m - 1].point.t())});
  return DiscreteMeasure<T>(mu.space(), std::move(atoms));
}

/// `J(mu)` computed through `generalized_inverse(cdf(mu))`; an oracle for `flip`.
template <Scalar T>
DiscreteMeasure<T> flip_via_cdf(const DiscreteMeasure<T>& mu) {
  return measure_from_cdf(generalized_inverse(cdf(mu)), mu.space());
}

/// `R#(mu)` with `R(t) = 1 - t`.
template <Scalar T>
DiscreteMeasure<T> reflect(const DiscreteMeasure<T>& mu) {
  detail::require_interval(mu, "reflect");
  return push_forward<T>([](const Point<T>& p) { return Point<T>::interval(T(T(1) - p.t())); },
                         mu);
}

template <Scalar T>
DiscreteMeasure<T> apply_interval_isometry(IntervalIsometry g, const DiscreteMeasure<T>& mu) {
  detail::require_interval(mu, "apply_interval_isometry");
  switch (g) {
    case IntervalIsometry::Identity: return mu;
    case IntervalIsometry::Reflect: return reflect(mu);
    case IntervalIsometry::Flip: return flip(mu);
    case IntervalIsometry::FlipReflect: return reflect(flip(mu));
  }
  return mu;
}

/// `Phi_phi(mu) = int phi(mu|x) (x) delta_x d(mu)_2(x)`.
template <Scalar T>
DiscreteMeasure<T> fiberwise(IntervalIsometry g, const DiscreteMeasure<T>& mu) {
  auto d = disintegrate(mu);
  for (auto& conditional : d.conditionals) conditional = apply_interval_isometry(g, conditional);
  return reassemble(d, mu.space());
}

/// Throws FiberCollisionError if two atoms of `mu` share a base point.
template <Scalar T>
void require_fiber_injective(const DiscreteMeasure<T>& mu, const char* what) {
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = i + 1; j < mu.size(); ++j) {
      if (mu[i].point.base() == mu[j].point.base()) {
        throw FiberCollisionError(std::string(what) + ": atoms " + mu[i].point.str() + " and " +
                                      mu[j].point.str() + " share a fiber",
                                  i, j);
      }
    }
  }
}

template <Scalar T>
bool is_fiber_injective(const DiscreteMeasure<T>& mu) {
  try {
    require_fiber_injective(mu, "");
  } catch (const FiberCollisionError&) {
    return false;
  }
  return true;
}

/**
 * Weights of the four-corner coupling between `t delta_0 + (1-t) delta_1`
 * and `s delta_0 + (1-s) delta_1`, ordered (0,0), (0,1), (1,0), (1,1).
 */
template <Scalar T>
std::array<T, 4> pi_hat_corners(const T& t, const T& s) {
  return {std::min<T>(t, s), scalar::positive_part(T(t - s)), scalar::positive_part(T(s - t)),
          T(T(1) - std::max<T>(t, s))};
}

/**
 * Lifts a coupling of fiber-injective product measures `mu, nu` to the
 * coupling `sum_jk gamma_jk pi_hat_jk` of `Phi_J(mu), Phi_J(nu)`.
 */
template <Scalar T>
Coupling<T> build_pi_hat(const Coupling<T>& pi, double tol = kDefaultTol) {
  const auto& mu = pi.rows();
  const auto& nu = pi.cols();
  if (mu.space()->kind() != SpaceKind::Product) {
    throw KindMismatchError("build_pi_hat: coupling is not between product measures");
  }
  require_fiber_injective(mu, "build_pi_hat (first marginal)");
  require_fiber_injective(nu, "build_pi_hat (second marginal)");
  DiscreteMeasure<T> fmu = fiberwise(IntervalIsometry::Flip, mu);
  DiscreteMeasure<T> fnu = fiberwise(IntervalIsometry::Flip, nu);

  auto index_of = [](const DiscreteMeasure<T>& m, const Point<T>& p) {
    auto it = std::lower_bound(m.atoms().begin(), m.atoms().end(), p,
                               [](const Atom<T>& a, const Point<T>& q) { return a.point < q; });
    if (it == m.atoms().end() || !(it->point == p)) {
      throw NumericalError("build_pi_hat: corner " + p.str() + " missing from flipped measure");
    }
    return static_cast<std::size_t>(it - m.atoms().begin());
  };

  Matrix<T> w(fmu.size(), fnu.size());
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const auto& yj = mu[j].point;
    for (std::size_t k = 0; k < nu.size(); ++k) {
      const T& gamma = pi.weight(j, k);
      if (gamma == T(0)) continue;
      const auto& yk = nu[k].point;
      auto corners = pi_hat_corners(yj.t(), yk.t());
      for (int c = 0; c < 4; ++c) {
        if (!(corners[c] > T(0))) continue;
        const T tj = c < 2 ? T(0) : T(1);
        const T tk = c % 2 == 0 ? T(0) : T(1);
        std::size_t r = index_of(fmu, yj.with_t(tj));
        std::size_t s = index_of(fnu, yk.with_t(tk));
        w(r, s) += gamma * corners[c];
      }
    }
  }
  return Coupling<T>(std::move(fmu), std::move(fnu), std::move(w), tol);
}

}  // namespace wiso

#endif  // WISO_ISOMETRY_HPP_
