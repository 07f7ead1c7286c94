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
 * @file measure.hpp
 *
 * @brief Finitely supported probability measures and the operations built
 * on them: mixtures, push-forwards, disintegration along the fiber
 * coordinate, meets and residual decompositions.
 *
 * Since supports are finite, every measure has finite moments of all
 * orders, so membership in W_p never needs a runtime check.
 */

#ifndef WISO_MEASURE_HPP_
#define WISO_MEASURE_HPP_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wiso/error.hpp"
#include "wiso/metric.hpp"
#include "wiso/point.hpp"
#include "wiso/scalar.hpp"

namespace wiso {

template <Scalar T>
struct Atom {
  Point<T> point;
  T mass;
};

namespace detail {

/// Sorts by point and merges exact duplicates. Zero masses are dropped.
template <Scalar T>
std::vector<Atom<T>> canonicalize(std::vector<Atom<T>> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom<T>& a, const Atom<T>& b) { return a.point < b.point; });
  std::vector<Atom<T>> out;
  out.reserve(atoms.size());
  for (auto& a : atoms) {
    if (!out.empty() && out.back().point == a.point) {
      out.back().mass += a.mass;
    } else {
      out.push_back(std::move(a));
    }
  }
  std::erase_if(out, [](const Atom<T>& a) { return a.mass == T(0); });
  return out;
}

template <Scalar T>
void check_masses(const std::vector<Atom<T>>& atoms) {
  for (const auto& a : atoms) {
    if (a.mass < T(0)) throw DomainError("negative mass at " + a.point.str());
    if constexpr (!ScalarTraits<T>::exact) {
      if (a.mass < kMassFloor) {
        throw DomainError("mass below floor at " + a.point.str() + ": " +
                          scalar::to_string(a.mass));
      }
    }
  }
}

template <Scalar T>
const Atom<T>* find_atom(const std::vector<Atom<T>>& atoms, const Point<T>& p) {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), p,
                             [](const Atom<T>& a, const Point<T>& q) { return a.point < q; });
  if (it != atoms.end() && it->point == p) return &*it;
  return nullptr;
}

}  // namespace detail

/**
 * Probability measure with finitely many atoms, kept in canonical form:
 * atoms sorted by point, pairwise distinct, every mass positive, total mass
 * one (exactly in rational mode, within `tol` in float mode).
 */
template <Scalar T>
class DiscreteMeasure {
 public:
  DiscreteMeasure(SpacePtr<T> space, std::vector<Atom<T>> atoms, double tol = kDefaultTol)
      : space_(std::move(space)) {
    if (!space_) throw DomainError("measure needs a space");
    for (const auto& a : atoms) space_->require(a.point);
    atoms_ = detail::canonicalize(std::move(atoms));
    detail::check_masses(atoms_);
    if (atoms_.empty()) throw DomainError("probability measure needs at least one atom");
    T total(0);
    for (const auto& a : atoms_) total += a.mass;
    if (!scalar::approx_equal(total, T(1), tol)) {
      throw DomainError("masses sum to " + scalar::to_string(total) + ", not 1");
    }
  }

  static DiscreteMeasure dirac(SpacePtr<T> space, Point<T> p) {
    std::vector<Atom<T>> atoms;
    atoms.push_back({std::move(p), T(1)});
    return DiscreteMeasure(std::move(space), std::move(atoms));
  }

  const SpacePtr<T>& space() const { return space_; }
  const std::vector<Atom<T>>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool is_dirac() const { return atoms_.size() == 1; }
  const Atom<T>& operator[](std::size_t i) const { return atoms_[i]; }

  T mass_of(const Point<T>& p) const {
    auto* a = detail::find_atom(atoms_, p);
    return a ? a->mass : T(0);
  }

  std::vector<Point<T>> support() const {
    std::vector<Point<T>> out;
    out.reserve(atoms_.size());
    for (const auto& a : atoms_) out.push_back(a.point);
    return out;
  }

  /// Exact, atom-for-atom equality.
  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    if (!same_space(a.space_, b.space_) || a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
      if (!(a.atoms_[i].point == b.atoms_[i].point) || !(a.atoms_[i].mass == b.atoms_[i].mass)) {
        return false;
      }
    }
    return true;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i) s += " + ";
      s += scalar::to_string(atoms_[i].mass) + " d" + atoms_[i].point.str();
    }
    return s;
  }

 private:
  SpacePtr<T> space_;
  std::vector<Atom<T>> atoms_;
};

/// Atom-for-atom comparison with slack `tol` on masses and coordinates.
template <Scalar T>
bool approx_equal(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!approx_equal(a[i].point, b[i].point, tol) ||
        !scalar::approx_equal(a[i].mass, b[i].mass, tol)) {
      return false;
    }
  }
  return true;
}

/**
 * Measure of total mass at most one; the null measure has no atoms. This is
 * what a meet produces, and it is kept apart from `DiscreteMeasure` so the
 * unit-mass invariant of the latter is never relaxed.
 */
template <Scalar T>
class SubMeasure {
 public:
  SubMeasure(SpacePtr<T> space, std::vector<Atom<T>> atoms) : space_(std::move(space)) {
    atoms_ = detail::canonicalize(std::move(atoms));
    for (const auto& a : atoms_) {
      if (a.mass < T(0)) throw DomainError("negative mass in sub-measure");
    }
    T total(0);
    for (const auto& a : atoms_) total += a.mass;
    if (!scalar::leq(total, T(1), kDefaultTol)) {
      throw DomainError("sub-probability measure has mass above 1");
    }
    total_ = total;
  }

  const SpacePtr<T>& space() const { return space_; }
  const std::vector<Atom<T>>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool is_null() const { return atoms_.empty(); }
  const T& total_mass() const { return total_; }

  T mass_of(const Point<T>& p) const {
    auto* a = detail::find_atom(atoms_, p);
    return a ? a->mass : T(0);
  }

  /// Rescales to unit mass; the null measure has no normalization.
  DiscreteMeasure<T> normalized() const {
    if (is_null()) throw DomainError("cannot normalize the null measure");
    std::vector<Atom<T>> atoms = atoms_;
    for (auto& a : atoms) a.mass /= total_;
    return DiscreteMeasure<T>(space_, std::move(atoms));
  }

 private:
  SpacePtr<T> space_;
  std::vector<Atom<T>> atoms_;
  T total_{0};
};

namespace detail {

template <Scalar T>
void require_same_space(const SpacePtr<T>& a, const SpacePtr<T>& b, const char* op) {
  if (!same_space(a, b)) throw KindMismatchError(std::string(op) + ": measures live on different spaces");
}

}  // namespace detail

/**
 * `sum_i w_i * m_i` for nonnegative weights summing to one. Terms with zero
 * weight are skipped, so they may refer to any measure.
 */
template <Scalar T>
DiscreteMeasure<T> mix(const std::vector<std::pair<T, const DiscreteMeasure<T>*>>& terms) {
  if (terms.empty()) throw DomainError("mix: no terms");
  SpacePtr<T> space = terms.front().second->space();
  std::vector<Atom<T>> atoms;
  for (const auto& [w, m] : terms) {
    detail::require_same_space(space, m->space(), "mix");
    if (w < T(0)) throw DomainError("mix: negative weight");
    if (w == T(0)) continue;
    for (const auto& a : m->atoms()) atoms.push_back({a.point, T(w * a.mass)});
  }
  return DiscreteMeasure<T>(space, std::move(atoms));
}

/// `(1 - lambda) mu + lambda nu`.
template <Scalar T>
DiscreteMeasure<T> convex_combine(const T& lambda, const DiscreteMeasure<T>& mu,
                                  const DiscreteMeasure<T>& nu) {
  if (lambda < T(0) || lambda > T(1)) throw DomainError("convex_combine: lambda outside [0,1]");
  detail::require_same_space(mu.space(), nu.space(), "convex_combine");
  if (lambda == T(0)) return mu;
  if (lambda == T(1)) return nu;
  return mix<T>({{T(T(1) - lambda), &mu}, {lambda, &nu}});
}

/**
 * Image measure under `map`; colliding images are merged. The target space
 * defaults to the source space.
 */
template <Scalar T>
DiscreteMeasure<T> push_forward(const std::function<Point<T>(const Point<T>&)>& map,
                                const DiscreteMeasure<T>& mu, SpacePtr<T> target = nullptr) {
  if (!target) target = mu.space();
  std::vector<Atom<T>> atoms;
  atoms.reserve(mu.size());
  for (const auto& a : mu.atoms()) {
    Point<T> image = map(a.point);
    if (!target->contains(image)) {
      throw KindMismatchError("push_forward: image " + image.str() + " is outside " +
                              target->spec());
    }
    atoms.push_back({std::move(image), a.mass});
  }
  return DiscreteMeasure<T>(std::move(target), std::move(atoms));
}

/**
 * Decomposition of a product-space measure into its base marginal and the
 * fiber conditionals, one per base point in the marginal's support.
 */
template <Scalar T>
struct Disintegration {
  DiscreteMeasure<T> marginal;
  /// Same order as `marginal.atoms()`.
  std::vector<DiscreteMeasure<T>> conditionals;
};

template <Scalar T>
Disintegration<T> disintegrate(const DiscreteMeasure<T>& mu) {
  const auto& space = mu.space();
  if (space->kind() != SpaceKind::Product) {
    throw KindMismatchError("disintegrate: measure is not on a product space");
  }
  auto fiber = MetricSpace<T>::interval(space->alpha());

  // Group atoms by base point. Canonical order sorts by t first, so sort a
  // copy by (x, t).
  std::vector<const Atom<T>*> order;
  for (const auto& a : mu.atoms()) order.push_back(&a);
  std::sort(order.begin(), order.end(), [](const Atom<T>* a, const Atom<T>* b) {
    int c = compare(a->point.base(), b->point.base());
    return c != 0 ? c < 0 : a->point.t() < b->point.t();
  });

  std::vector<Atom<T>> marginal_atoms;
  std::vector<std::vector<Atom<T>>> fibers;
  for (const Atom<T>* a : order) {
    if (marginal_atoms.empty() || !(marginal_atoms.back().point == a->point.base())) {
      marginal_atoms.push_back({a->point.base(), T(0)});
      fibers.emplace_back();
    }
    marginal_atoms.back().mass += a->mass;
    fibers.back().push_back({Point<T>::interval(a->point.t()), a->mass});
  }

  std::vector<DiscreteMeasure<T>> conditionals;
  conditionals.reserve(fibers.size());
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    for (auto& a : fibers[i]) a.mass /= marginal_atoms[i].mass;
    conditionals.emplace_back(fiber, std::move(fibers[i]));
  }
  return Disintegration<T>{DiscreteMeasure<T>(space->base(), std::move(marginal_atoms)),
                           std::move(conditionals)};
}

/// Inverse of `disintegrate`: `sum_x marginal(x) * (conditional_x (x) delta_x)`.
template <Scalar T>
DiscreteMeasure<T> reassemble(const Disintegration<T>& d, SpacePtr<T> product_space) {
  if (product_space->kind() != SpaceKind::Product) {
    throw KindMismatchError("reassemble: target is not a product space");
  }
  if (d.conditionals.size() != d.marginal.size()) {
    throw DomainError("reassemble: one conditional per marginal atom expected");
  }
  std::vector<Atom<T>> atoms;
  for (std::size_t i = 0; i < d.marginal.size(); ++i) {
    const auto& x = d.marginal[i];
    for (const auto& a : d.conditionals[i].atoms()) {
      atoms.push_back({Point<T>::product(a.point.t(), x.point), T(x.mass * a.mass)});
    }
  }
  return DiscreteMeasure<T>(std::move(product_space), std::move(atoms));
}

/// Greatest measure below both: the atom-wise minimum.
template <Scalar T>
SubMeasure<T> meet(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  detail::require_same_space(mu.space(), nu.space(), "meet");
  std::vector<Atom<T>> atoms;
  std::size_t i = 0, j = 0;
  while (i < mu.size() && j < nu.size()) {
    int c = compare(mu[i].point, nu[j].point);
    if (c == 0) {
      atoms.push_back({mu[i].point, std::min<T>(mu[i].mass, nu[j].mass)});
      ++i;
      ++j;
    } else if (c < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  return SubMeasure<T>(mu.space(), std::move(atoms));
}

/**
 * `mu = (1-a) common + a mu'` and `nu = (1-a) common + a nu'`, where
 * `(1-a) common` is the meet and `mu'`, `nu'` have disjoint supports.
 * `common` is absent when the meet is null (a = 1).
 */
template <Scalar T>
struct ResidualSplit {
  T a;
  std::optional<DiscreteMeasure<T>> common;
  DiscreteMeasure<T> mu_residual;
  DiscreteMeasure<T> nu_residual;
};

/// Returned when `mu == nu`: a = 0 and both residuals are null.
struct IdenticalMeasures {};

template <Scalar T>
using ResidualDecomposition = std::variant<ResidualSplit<T>, IdenticalMeasures>;

template <Scalar T>
ResidualDecomposition<T> residual_decompose(const DiscreteMeasure<T>& mu,
                                            const DiscreteMeasure<T>& nu) {
  detail::require_same_space(mu.space(), nu.space(), "residual_decompose");
  if (mu == nu) return IdenticalMeasures{};
  SubMeasure<T> common = meet(mu, nu);
  T a = T(1) - common.total_mass();
  if (!(a > T(0))) return IdenticalMeasures{};

  auto residual = [&](const DiscreteMeasure<T>& m) {
    std::vector<Atom<T>> atoms;
    for (const auto& at : m.atoms()) {
      T rest = at.mass - common.mass_of(at.point);
      if (rest > T(0)) atoms.push_back({at.point, T(rest / a)});
    }
    return DiscreteMeasure<T>(m.space(), std::move(atoms));
  };
  std::optional<DiscreteMeasure<T>> c;
  if (!common.is_null()) c = common.normalized();
  return ResidualSplit<T>{a, std::move(c), residual(mu), residual(nu)};
}

/// Restriction of `mu` to the points of `set`, as a sub-measure.
template <Scalar T>
SubMeasure<T> restrict_to(const DiscreteMeasure<T>& mu, const std::vector<Point<T>>& set) {
  std::vector<Atom<T>> atoms;
  for (const auto& a : mu.atoms()) {
    if (std::find(set.begin(), set.end(), a.point) != set.end()) atoms.push_back(a);
  }
  return SubMeasure<T>(mu.space(), std::move(atoms));
}

}  // namespace wiso

#endif  // WISO_MEASURE_HPP_
