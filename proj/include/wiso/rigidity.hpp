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
 * @file rigidity.hpp
 *
 * @brief Finite probes of W_1 rigidity on `[0,1] x X` with `alpha < 1`.
 *
 * The metric lambda-ratio set of `mu != nu` is
 * `M_lambda(mu, nu) = {xi : W1(mu, xi) = lambda W1(mu, nu),
 *                           W1(xi, nu) = (1 - lambda) W1(mu, nu)}`
 * and always contains `(1 - lambda) mu + lambda nu`. It is a singleton exactly
 * for Dirac pairs `mu = (1-c) eta + c delta_y`, `nu = (1-c) eta + c delta_y'`
 * whose metric segment `[y, y']` is `{y, y'}`. Scans here are restricted to
 * finite candidate families.
 */

#ifndef WISO_RIGIDITY_HPP_
#define WISO_RIGIDITY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wiso/coupling.hpp"
#include "wiso/error.hpp"
#include "wiso/measure.hpp"
#include "wiso/metric.hpp"
#include "wiso/random.hpp"
#include "wiso/transport.hpp"

namespace wiso {

/// `mu = (1-c) eta + c delta_y`, `nu = (1-c) eta + c delta_y'`; eta is
/// absent when c = 1.
template <Scalar T>
struct DiracPairForm {
  std::optional<DiscreteMeasure<T>> eta;
  T c;
  Point<T> y;
  Point<T> y_prime;
};

template <Scalar T>
std::pair<DiscreteMeasure<T>, DiscreteMeasure<T>> dirac_pair(const DiracPairForm<T>& form,
                                                             const SpacePtr<T>& space) {
  auto build = [&](const Point<T>& top) {
    std::vector<Atom<T>> atoms{{top, form.c}};
    if (form.eta) {
      for (const auto& a : form.eta->atoms()) {
        atoms.push_back({a.point, T((T(1) - form.c) * a.mass)});
      }
    }
    return DiscreteMeasure<T>(space, std::move(atoms));
  };
  return {build(form.y), build(form.y_prime)};
}

/**
 * Recovers the Dirac-pair form of `mu, nu` when both residuals of the meet
 * decomposition are single atoms. Throws DomainError when `mu == nu`.
 */
template <Scalar T>
std::optional<DiracPairForm<T>> detect_dirac_pair_form(const DiscreteMeasure<T>& mu,
                                                       const DiscreteMeasure<T>& nu) {
  auto dec = residual_decompose(mu, nu);
  if (std::holds_alternative<IdenticalMeasures>(dec)) {
    throw DomainError("detect_dirac_pair_form: measures are equal");
  }
  auto& split = std::get<ResidualSplit<T>>(dec);
  if (!split.mu_residual.is_dirac() || !split.nu_residual.is_dirac()) return std::nullopt;
  return DiracPairForm<T>{std::move(split.common), split.a, split.mu_residual[0].point,
                          split.nu_residual[0].point};
}

template <Scalar T>
struct RatioMembership {
  bool member = false;
  /// W1(mu, xi) - lambda W1(mu, nu).
  T residual_mu{0};
  /// W1(xi, nu) - (1 - lambda) W1(mu, nu).
  T residual_nu{0};
};

template <Scalar T>
RatioMembership<T> ratio_set_membership(const DiscreteMeasure<T>& xi, const DiscreteMeasure<T>& mu,
                                        const DiscreteMeasure<T>& nu, const T& lambda,
                                        double tol = kDefaultTol,
                                        const SolverOptions& options = {}) {
  if (!(lambda > T(0)) || !(lambda < T(1))) {
    throw DomainError("ratio_set_membership: lambda must lie in (0, 1)");
  }
  if (mu == nu) throw DomainError("ratio_set_membership: mu and nu must differ");
  const T total = w1(mu, nu, options);
  RatioMembership<T> out;
  out.residual_mu = w1(mu, xi, options) - lambda * total;
  out.residual_nu = w1(xi, nu, options) - (T(1) - lambda) * total;
  out.member = scalar::is_zero(out.residual_mu, tol) && scalar::is_zero(out.residual_nu, tol);
  return out;
}

/**
 * Mixtures `sum_k w_k C_k` of component measures with weights on the grid
 * `1/steps`, followed by any injected candidates.
 */
template <Scalar T>
class MixtureGrid {
 public:
  MixtureGrid(std::vector<DiscreteMeasure<T>> components, std::int64_t steps = 20)
      : components_(std::move(components)), steps_(steps) {
    if (components_.empty()) throw DomainError("MixtureGrid: no components");
    if (steps_ < 1) throw DomainError("MixtureGrid: steps must be >= 1");
  }

  void inject(DiscreteMeasure<T> candidate) { injected_.push_back(std::move(candidate)); }

  std::vector<DiscreteMeasure<T>> candidates() const {
    std::vector<DiscreteMeasure<T>> out;
    std::vector<std::int64_t> w(components_.size(), 0);
    enumerate(0, steps_, w, out);
    out.insert(out.end(), injected_.begin(), injected_.end());
    return out;
  }

 private:
  void enumerate(std::size_t k, std::int64_t left, std::vector<std::int64_t>& w,
                 std::vector<DiscreteMeasure<T>>& out) const {
    if (k + 1 == components_.size()) {
      w[k] = left;
      std::vector<std::pair<T, const DiscreteMeasure<T>*>> terms;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 0) terms.emplace_back(scalar::from_ratio<T>(w[i], steps_), &components_[i]);
      }
      out.push_back(mix(terms));
      return;
    }
    for (std::int64_t x = 0; x <= left; ++x) {
      w[k] = x;
      enumerate(k + 1, left - x, w, out);
    }
  }

  std::vector<DiscreteMeasure<T>> components_;
  std::int64_t steps_;
  std::vector<DiscreteMeasure<T>> injected_;
};

template <Scalar T>
struct RatioMember {
  DiscreteMeasure<T> measure;
  T residual_mu;
  T residual_nu;
};

template <Scalar T>
struct RatioSetReport {
  T lambda;
  DiscreteMeasure<T> mu;
  DiscreteMeasure<T> nu;
  /// Distinct members, in candidate order.
  std::vector<RatioMember<T>> members;
  bool convex_combination_included = false;
  /// Some member differs from `(1 - lambda) mu + lambda nu`.
  bool has_other_member = false;
  std::size_t candidates_examined = 0;

  bool is_singleton() const { return members.size() == 1 && convex_combination_included; }
};

template <Scalar T>
RatioSetReport<T> ratio_set_scan(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                                 const T& lambda, const std::vector<DiscreteMeasure<T>>& candidates,
                                 double tol = kDefaultTol, const SolverOptions& options = {}) {
  if (candidates.empty()) throw DomainError("ratio_set_scan: no candidates");
  const DiscreteMeasure<T> combo = convex_combine(lambda, mu, nu);
  RatioSetReport<T> report{lambda, mu, nu, {}, false, false, 0};
  for (const auto& xi : candidates) {
    ++report.candidates_examined;
    auto m = ratio_set_membership(xi, mu, nu, lambda, tol, options);
    if (!m.member) continue;
    bool seen = std::any_of(report.members.begin(), report.members.end(),
                            [&](const RatioMember<T>& r) { return approx_equal(r.measure, xi, tol); });
    if (seen) continue;
    if (approx_equal(xi, combo, tol)) {
      report.convex_combination_included = true;
    } else {
      report.has_other_member = true;
    }
    report.members.push_back({xi, m.residual_mu, m.residual_nu});
  }
  return report;
}

/// Grid over `delta_y`, `delta_y'` and `eta`, with the convex combination injected.
template <Scalar T>
MixtureGrid<T> dirac_pair_grid(const DiracPairForm<T>& form, const SpacePtr<T>& space,
                               const T& lambda, std::int64_t steps = 20) {
  std::vector<DiscreteMeasure<T>> parts{DiscreteMeasure<T>::dirac(space, form.y),
                                        DiscreteMeasure<T>::dirac(space, form.y_prime)};
  if (form.eta) parts.push_back(*form.eta);
  MixtureGrid<T> grid(std::move(parts), steps);
  auto [mu, nu] = dirac_pair(form, space);
  grid.inject(convex_combine(lambda, mu, nu));
  return grid;
}

template <Scalar T>
struct SplitTransport {
  T lambda;
  DiscreteMeasure<T> mu1, mu2, nu1, nu2;
  T total;
  T part1;
  T part2;
  /// total - lambda part1 - (1 - lambda) part2.
  T residual;
};

/**
 * Splits `mu` along `S` and `nu` along an optimal plan restricted to
 * `S x Z` and its complement.
 */
template <Scalar T>
SplitTransport<T> split_transport(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                                  const std::vector<Point<T>>& set,
                                  const SolverOptions& options = {}) {
  std::vector<Point<T>> rest;
  for (const auto& a : mu.atoms()) {
    if (std::find(set.begin(), set.end(), a.point) == set.end()) rest.push_back(a.point);
  }
  const T mass = restrict_to(mu, set).total_mass();
  if (!(mass > T(0)) || rest.empty()) {
    throw DomainError("split_transport: S must carry mass strictly between 0 and 1");
  }
  auto plan = solve_wasserstein(mu, nu, Exponent(1), options);
  auto first = restrict_and_renormalize(plan.coupling, set, Side::Row);
  auto second = restrict_and_renormalize(plan.coupling, rest, Side::Row);
  SplitTransport<T> out{first.lambda,
                        first.coupling.rows(),
                        second.coupling.rows(),
                        first.coupling.cols(),
                        second.coupling.cols(),
                        plan.powered_cost,
                        T(0),
                        T(0),
                        T(0)};
  out.part1 = w1(out.mu1, out.nu1, options);
  out.part2 = w1(out.mu2, out.nu2, options);
  out.residual = out.total - out.lambda * out.part1 - (T(1) - out.lambda) * out.part2;
  return out;
}

/// `pi_* = c delta_(y, y') + (1 - c) (Id x Id)# eta`.
template <Scalar T>
Coupling<T> pi_star(const DiracPairForm<T>& form, const SpacePtr<T>& space,
                    double tol = kDefaultTol) {
  auto [mu, nu] = dirac_pair(form, space);
  auto index = [](const DiscreteMeasure<T>& m, const Point<T>& p) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].point == p) return i;
    }
    throw NumericalError("pi_star: point missing from marginal");
  };
  Matrix<T> w(mu.size(), nu.size());
  w(index(mu, form.y), index(nu, form.y_prime)) += form.c;
  if (form.eta) {
    for (const auto& a : form.eta->atoms()) {
      w(index(mu, a.point), index(nu, a.point)) += (T(1) - form.c) * a.mass;
    }
  }
  return Coupling<T>(std::move(mu), std::move(nu), std::move(w), tol);
}

/// Largest entry-wise difference of two couplings with identical marginals.
template <Scalar T>
T coupling_difference(const Coupling<T>& a, const Coupling<T>& b) {
  if (!(a.rows() == b.rows()) || !(a.cols() == b.cols())) {
    throw DomainError("coupling_difference: marginals differ");
  }
  T worst(0);
  for (std::size_t i = 0; i < a.m(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) {
      T d = scalar::abs(T(a.weight(i, j) - b.weight(i, j)));
      if (d > worst) worst = d;
    }
  }
  return worst;
}

/// Largest `|f_y(u') - f_y(u) - d(u, u')|` over the support of `pi`, with
/// `f_y = d(y, .)`.
template <Scalar T>
T dual_slackness_residual(const Coupling<T>& pi, const MetricSpace<T>& space, const Point<T>& y) {
  T worst(0);
  for (std::size_t i = 0; i < pi.m(); ++i) {
    for (std::size_t j = 0; j < pi.n(); ++j) {
      if (pi.weight(i, j) == T(0)) continue;
      const auto& u = pi.rows()[i].point;
      const auto& v = pi.cols()[j].point;
      T r = scalar::abs(T(space.distance(y, v) - space.distance(y, u) - space.distance(u, v)));
      if (r > worst) worst = r;
    }
  }
  return worst;
}

/// Ratio-set witness together with the convex combination it differs from.
template <Scalar T>
struct RatioWitness {
  T lambda;
  DiscreteMeasure<T> xi;
  DiscreteMeasure<T> convex_combination;
};

/**
 * For a Dirac pair whose segment contains an interior point `r`, the member
 * `(1 - c) eta + c delta_r` of `M_lambda` with `lambda = d(y, r) / d(y, y')`.
 */
template <Scalar T>
RatioWitness<T> segment_point_witness(const DiracPairForm<T>& form, const SpacePtr<T>& space,
                                      const Point<T>& r) {
  const T total = space->distance(form.y, form.y_prime);
  if (!(total > T(0))) throw DomainError("segment_point_witness: y and y' coincide");
  DiracPairForm<T> moved = form;
  moved.y = r;
  auto [xi, unused] = dirac_pair(moved, space);
  (void)unused;
  auto [mu, nu] = dirac_pair(form, space);
  T lambda = space->distance(form.y, r) / total;
  return {lambda, xi, convex_combine(lambda, mu, nu)};
}

/**
 * Ratio-set member for a pair without Dirac-pair form: with
 * `mu = (mu ^ nu) + a mu'` and `nu = (mu ^ nu) + a nu'`, split `mu'` along
 * `S` into `lambda mu'_1 + (1 - lambda) mu'_2`, split `nu'` accordingly and
 * return `xi = (mu ^ nu) + a lambda nu'_1 + a (1 - lambda) mu'_2` with its ratio.
 */
template <Scalar T>
RatioWitness<T> residual_split_witness(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                                       const std::vector<Point<T>>& set,
                                       const SolverOptions& options = {}) {
  auto dec = residual_decompose(mu, nu);
  if (std::holds_alternative<IdenticalMeasures>(dec)) {
    throw DomainError("residual_split_witness: measures are equal");
  }
  const auto& split = std::get<ResidualSplit<T>>(dec);
  auto parts = split_transport(split.mu_residual, split.nu_residual, set, options);
  const T& a = split.a;
  std::vector<std::pair<T, const DiscreteMeasure<T>*>> terms{
      {T(a * parts.lambda), &parts.nu1}, {T(a * (T(1) - parts.lambda)), &parts.mu2}};
  if (split.common) terms.emplace_back(T(T(1) - a), &*split.common);
  DiscreteMeasure<T> xi = mix(terms);
  const T total = w1(mu, nu, options);
  T tau = a * parts.lambda * parts.part1 / total;
  return {tau, xi, convex_combine(tau, mu, nu)};
}

/// The curve `s -> gamma(s)` of a Dirac pair, extended to the left up to `delta_y~`.
template <Scalar T>
struct GeodesicExtension {
  SpacePtr<T> space;
  DiscreteMeasure<T> eta;
  Point<T> y_tilde;
  Point<T> y_tilde_prime;
  T c;
  /// c d(y~, y~').
  T v;
  /// W1(delta_y~, eta).
  T r;

  T left_end() const { return T(-(r * (T(1) - c)) / v); }
};

template <Scalar T>
GeodesicExtension<T> make_geodesic_extension(DiscreteMeasure<T> eta, Point<T> y_tilde,
                                             Point<T> y_tilde_prime, const T& c,
                                             const SolverOptions& options = {}) {
  if (!(c > T(0)) || !(c < T(1))) throw DomainError("make_geodesic_extension: c must lie in (0, 1)");
  SpacePtr<T> space = eta.space();
  T v = c * space->distance(y_tilde, y_tilde_prime);
  T r = w1(DiscreteMeasure<T>::dirac(space, y_tilde), eta, options);
  if (!(v > T(0))) throw DomainError("make_geodesic_extension: y~ and y~' coincide");
  if (!(r > T(0))) throw DomainError("make_geodesic_extension: eta equals delta_y~");
  return {space, std::move(eta), std::move(y_tilde), std::move(y_tilde_prime), c, v, r};
}

template <Scalar T>
DiscreteMeasure<T> extend_geodesic(const GeodesicExtension<T>& ext, const T& s_in) {
  const T lo = ext.left_end();
  if (s_in < lo || s_in > T(1)) {
    throw DomainError("extend_geodesic: s = " + scalar::to_string(s_in) + " outside [" +
                      scalar::to_string(lo) + ", 1]");
  }
  T s = s_in;
  if constexpr (!ScalarTraits<T>::exact) {
    // Snap rounding noise at 0 and 1 so no sub-floor atoms appear.
    if (std::fabs(s) < 1e-12) s = 0.0;
    if (s > 1.0 - 1e-12) s = 1.0;
  }
  std::vector<Atom<T>> atoms;
  if (s <= T(0)) {
    T w = s * ext.v / (ext.r * (ext.c - T(1)));
    if constexpr (!ScalarTraits<T>::exact) {
      w = std::clamp(w, 0.0, 1.0);
      if (w > 1.0 - 1e-12) w = 1.0;
    }
    atoms.push_back({ext.y_tilde, T(w + (T(1) - w) * ext.c)});
    for (const auto& a : ext.eta.atoms()) {
      atoms.push_back({a.point, T((T(1) - w) * (T(1) - ext.c) * a.mass)});
    }
  } else {
    atoms.push_back({ext.y_tilde, T(ext.c * (T(1) - s))});
    atoms.push_back({ext.y_tilde_prime, T(ext.c * s)});
    for (const auto& a : ext.eta.atoms()) {
      atoms.push_back({a.point, T((T(1) - ext.c) * a.mass)});
    }
  }
  return DiscreteMeasure<T>(ext.space, std::move(atoms));
}

template <Scalar T>
struct GeodesicCheck {
  bool pass = true;
  /// Largest `|W1(gamma(s1), gamma(s2)) - (s2 - s1) v|`.
  double worst_residual = 0.0;
  /// Largest `|lower bound from f_y~ - (s2 - s1) v|`.
  double worst_dual_residual = 0.0;
};

template <Scalar T>
GeodesicCheck<T> geodesic_speed_check(const GeodesicExtension<T>& ext,
                                      const std::vector<std::pair<T, T>>& samples,
                                      double tol = 1e-8, const SolverOptions& options = {}) {
  GeodesicCheck<T> out;
  const auto& space = *ext.space;
  auto integral = [&](const DiscreteMeasure<T>& m) {
    T sum(0);
    for (const auto& a : m.atoms()) sum += a.mass * space.distance(ext.y_tilde, a.point);
    return sum;
  };
  for (const auto& [s1, s2] : samples) {
    if (s2 < s1) throw DomainError("geodesic_speed_check: sample pairs need s1 <= s2");
    auto g1 = extend_geodesic(ext, s1);
    auto g2 = extend_geodesic(ext, s2);
    const T target = (s2 - s1) * ext.v;
    const T dist = w1(g1, g2, options);
    const T lower = integral(g2) - integral(g1);
    const double res = scalar::to_double(scalar::abs(T(dist - target)));
    const double dual = scalar::to_double(scalar::abs(T(lower - target)));
    out.worst_residual = std::max(out.worst_residual, res);
    out.worst_dual_residual = std::max(out.worst_dual_residual, dual);
    if (!(res <= tol) || !(dual <= tol)) out.pass = false;
  }
  return out;
}

/// Seeded stream of measures whose atoms have pairwise-distinct t coordinates.
template <Scalar T>
class InductionFamily {
 public:
  InductionFamily(SpacePtr<T> space, std::size_t n_atoms, std::uint64_t seed,
                  SamplerOptions options = {})
      : space_(std::move(space)), n_atoms_(n_atoms), sampler_(seed, options) {
    if (space_->kind() != SpaceKind::Product) {
      throw KindMismatchError("InductionFamily: space must be a product space");
    }
    if (n_atoms_ < 1) throw DomainError("InductionFamily: n_atoms must be >= 1");
  }

  DiscreteMeasure<T> next() { return sampler_.measure(space_, n_atoms_, true); }

 private:
  SpacePtr<T> space_;
  std::size_t n_atoms_;
  Sampler<T> sampler_;
};

/**
 * One induction step on `mu = sum_i a_i delta_y_i`: the last two atoms are
 * merged onto each endpoint, giving a Dirac pair `mu1, mu2` with
 * `mu = (1 - ratio) mu1 + ratio mu2`.
 */
template <Scalar T>
struct InductionStep {
  DiscreteMeasure<T> mu1;
  DiscreteMeasure<T> mu2;
  DiracPairForm<T> form;
  /// `a_N / (a_N + a_{N+1})`, the weight of `mu1`.
  T weight;
  /// `1 - weight`; `mu` lies in `M_ratio(mu1, mu2)`.
  T ratio;
};

template <Scalar T>
InductionStep<T> induction_step(const DiscreteMeasure<T>& mu) {
  const std::size_t k = mu.size();
  if (k < 2) throw DomainError("induction_step: measure needs at least two atoms");
  const auto& yn = mu[k - 2];
  const auto& yn1 = mu[k - 1];
  const T merged = yn.mass + yn1.mass;
  std::optional<DiscreteMeasure<T>> eta;
  if (k > 2) {
    std::vector<Atom<T>> rest;
    for (std::size_t i = 0; i + 2 < k; ++i) rest.push_back({mu[i].point, T(mu[i].mass / (T(1) - merged))});
    eta.emplace(mu.space(), std::move(rest));
  }
  DiracPairForm<T> form{std::move(eta), merged, yn.point, yn1.point};
  auto [mu1, mu2] = dirac_pair(form, mu.space());
  T weight = yn.mass / merged;
  return {std::move(mu1), std::move(mu2), std::move(form), weight, T(T(1) - weight)};
}

}  // namespace wiso

#endif  // WISO_RIGIDITY_HPP_
