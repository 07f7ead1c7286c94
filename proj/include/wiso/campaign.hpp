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
 * @file campaign.hpp
 *
 * @brief Seeded verification campaigns.
 *
 * A campaign runs one named suite for a number of trials. Trial `k` draws its
 * instance from `trial_seed(seed, k)` and reports a nonnegative residual;
 * structural failures report infinity. The campaign passes iff every
 * residual is at most `tol`.
 */

#ifndef WISO_CAMPAIGN_HPP_
#define WISO_CAMPAIGN_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "wiso/error.hpp"
#include "wiso/io.hpp"
#include "wiso/isometry.hpp"
#include "wiso/kr_dual.hpp"
#include "wiso/measure.hpp"
#include "wiso/metric.hpp"
#include "wiso/random.hpp"
#include "wiso/rigidity.hpp"
#include "wiso/transport.hpp"

namespace wiso {

enum class Mode { Float, Rational };

inline Mode parse_mode(std::string_view s) {
  if (s == "float") return Mode::Float;
  if (s == "rational") return Mode::Rational;
  throw DomainError("mode must be 'float' or 'rational', got '" + std::string(s) + "'");
}

inline std::string_view mode_name(Mode m) { return m == Mode::Float ? "float" : "rational"; }

struct RunConfig {
  /// Space spec; empty selects the suite default.
  std::string space;
  Mode mode = Mode::Float;
  double tol = 1e-8;
  std::uint64_t seed = 42;
  std::size_t trials = 100;
  /// Wasserstein exponent for the distance command; suites fix their own.
  Exponent p{1};
  std::size_t max_atoms = 6;
  std::int64_t window = 1;
  bool nonnegative = false;

  void validate() const {
    if (!(tol > 0)) throw DomainError("tol must be positive");
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (max_atoms < 1) throw DomainError("max_atoms must be >= 1");
    if (window < 1) throw DomainError("window must be >= 1");
  }

  void set(std::string_view key, std::string_view value) {
    auto as_uint = [&](std::string_view v) {
      auto r = parse_rational(v);
      if (!r || r->get_den() != 1 || *r < 0 || !r->get_num().fits_ulong_p()) {
        throw DomainError("'" + std::string(key) + "' needs a nonnegative integer");
      }
      return static_cast<std::uint64_t>(r->get_num().get_ui());
    };
    if (key == "space") {
      space = std::string(value);
    } else if (key == "mode") {
      mode = parse_mode(value);
    } else if (key == "tol") {
      auto r = parse_rational(value);
      if (!r) throw DomainError("'tol' needs a number");
      tol = ScalarTraits<double>::from_rational(*r);
    } else if (key == "seed") {
      seed = as_uint(value);
    } else if (key == "trials") {
      trials = as_uint(value);
    } else if (key == "p") {
      p = Exponent::parse(value);
      if (p < Exponent(1)) throw DomainError("p must be >= 1");
    } else if (key == "max_atoms") {
      max_atoms = as_uint(value);
    } else if (key == "window") {
      window = static_cast<std::int64_t>(as_uint(value));
    } else {
      throw DomainError("unknown config key '" + std::string(key) + "'");
    }
  }

  /// Reads `key = value` lines; `#` starts a comment.
  void load(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string_view s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string_view::npos) return std::string_view{};
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view body(line);
      body = body.substr(0, std::min(body.find('#'), body.size()));
      body = trim(body);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, 1);
      try {
        set(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      } catch (const DomainError& e) {
        throw ParseError(e.what(), line_no, 1);
      }
    }
  }

  SamplerOptions sampler() const {
    SamplerOptions o;
    o.window = window;
    o.nonnegative = nonnegative;
    return o;
  }
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double residual = 0.0;
  bool pass = false;
};

struct CampaignReport {
  std::string suite;
  std::string space;
  RunConfig config;
  std::vector<TrialRecord> trials;
  bool pass = true;
  double max_residual = 0.0;
  double wall_seconds = 0.0;

  void write_csv(std::ostream& out) const {
    out << "trial,seed,residual,pass\n";
    for (const auto& t : trials) {
      out << t.trial << ',' << t.seed << ',' << format_double(t.residual) << ','
          << (t.pass ? "true" : "false") << '\n';
    }
  }

  /// One `key value` line per field, then one record per trial.
  void write_text(std::ostream& out, bool with_time = true) const {
    out << "suite " << suite << '\n';
    out << "space " << space << '\n';
    out << "mode " << mode_name(config.mode) << '\n';
    out << "seed " << config.seed << '\n';
    out << "trials " << config.trials << '\n';
    out << "tol " << format_double(config.tol) << '\n';
    for (const auto& t : trials) {
      out << "trial " << t.trial << " seed " << t.seed << " residual "
          << format_double(t.residual) << ' ' << (t.pass ? "pass" : "FAIL") << '\n';
    }
    out << "max_residual " << format_double(max_residual) << '\n';
    out << "result " << (pass ? "pass" : "FAIL") << '\n';
    if (with_time) out << "wall_seconds " << format_double(wall_seconds) << '\n';
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "metric-axioms",      "flip-isometry",      "fiber-flip-isometry", "pi-hat-cost",
      "translation-invariance", "duality-gap",    "ratio-singleton",     "ratio-witness",
      "lemma31-additivity", "geodesic-extension"};
  return names;
}

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"example-2-1", "example-2-2", "example-2-3",
                                              "example-3-2"};
  return names;
}

namespace probes {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <Scalar T>
double abs_d(const T& x) {
  return std::fabs(scalar::to_double(x));
}

template <Scalar T>
std::size_t atom_count(Sampler<T>& s, std::size_t max_atoms, std::size_t min_atoms = 1) {
  return static_cast<std::size_t>(
      s.integer(static_cast<std::int64_t>(min_atoms),
                static_cast<std::int64_t>(std::max(min_atoms, max_atoms))));
}

/// Caps the atom count by the number of points of a finite space.
template <Scalar T>
std::size_t support_cap(const SpacePtr<T>& space, std::size_t max_atoms) {
  return space->kind() == SpaceKind::Finite ? std::min(max_atoms, space->size()) : max_atoms;
}

template <Scalar T>
const MetricSpace<T>& require_product(const SpacePtr<T>& space, const char* suite) {
  if (space->kind() != SpaceKind::Product) {
    throw KindMismatchError(std::string(suite) + " needs a product space");
  }
  return *space;
}

/// Identity, symmetry, separation and the triangle inequality on a sampled triple.
template <Scalar T>
double metric_axioms(Sampler<T>& s, const SpacePtr<T>& space, const RunConfig& cfg) {
  auto a = s.point(*space), b = s.point(*space), c = s.point(*space);
  double worst = abs_d(space->distance(a, a));
  worst = std::max(worst, abs_d(T(space->distance(a, b) - space->distance(b, a))));
  for (auto [x, y] : {std::pair{&a, &b}, std::pair{&b, &c}, std::pair{&a, &c}}) {
    if (!(*x == *y) && !(space->distance(*x, *y) > T(0))) return kInf;
  }
  worst = std::max(worst, std::max(0.0, -scalar::to_double(triangle_defect(*space, a, b, c, 0.0))));
  worst = std::max(worst, std::max(0.0, -scalar::to_double(triangle_defect(*space, b, a, c, 0.0))));
  (void)cfg;
  return worst;
}

/// `J` and `R#` preserve W1 on [0,1], and `J` is an involution.
template <Scalar T>
double flip_isometry(Sampler<T>& s, const SpacePtr<T>& space, const RunConfig& cfg) {
  auto mu = s.measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  auto nu = s.measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  if (!(flip(flip(mu)) == mu) && !approx_equal(flip(flip(mu)), mu, cfg.tol)) return kInf;
  const T base = w1(mu, nu);
  double worst = abs_d(T(w1(flip(mu), flip(nu)) - base));
  worst = std::max(worst, abs_d(T(w1(reflect(mu), reflect(nu)) - base)));
  return worst;
}

/// `W_q(Phi_J mu, Phi_J nu) = W_q(mu, nu)` on `Product(1/q, q, X)`.
template <Scalar T>
double fiber_flip_isometry(Sampler<T>& s, const SpacePtr<T>& space, const RunConfig& cfg) {
  const auto& y = require_product(space, "fiber-flip-isometry");
  if (!(y.alpha() * y.q() == Exponent(1))) {
    throw DomainError("fiber-flip-isometry needs alpha = 1/q");
  }
  auto mu = s.fiber_injective_measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  auto nu = s.fiber_injective_measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  auto before = solve_wasserstein(mu, nu, y.q());
  auto after = solve_wasserstein(fiberwise(IntervalIsometry::Flip, mu),
                                 fiberwise(IntervalIsometry::Flip, nu), y.q());
  if (!before.certified || !after.certified) return kInf;
  return std::fabs(after.cost - before.cost);
}

/// `cost(pi_hat) = cost(pi)` under `d^q` for a random feasible coupling.
template <Scalar T>
double pi_hat_cost(Sampler<T>& s, const SpacePtr<T>& space, const RunConfig& cfg) {
  const auto& y = require_product(space, "pi-hat-cost");
  if (!(y.alpha() * y.q() == Exponent(1))) throw DomainError("pi-hat-cost needs alpha = 1/q");
  auto mu = s.fiber_injective_measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  auto nu = s.fiber_injective_measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  auto pi = s.coupling(mu, nu);
  auto hat = build_pi_hat(pi, cfg.tol);
  return abs_d(T(coupling_cost(hat, y, y.q(), cfg.tol) - coupling_cost(pi, y, y.q(), cfg.tol)));
}

/// `W1(c mu + (1-c) xi, c nu + (1-c) xi) = c W1(mu, nu)`.
template <Scalar T>
double translation_invariance(Sampler<T>& s, const SpacePtr<T>& space, const RunConfig& cfg) {
  auto mu = s.measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  auto nu = s.measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  auto xi = s.measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  const T c = s.open_unit();
  auto left = mix<T>({{c, &mu}, {T(T(1) - c), &xi}});
  auto right = mix<T>({{c, &nu}, {T(T(1) - c), &xi}});
  return abs_d(T(w1(left, right) - c * w1(mu, nu)));
}

/// Transportation simplex value against the independent Lipschitz LP.
template <Scalar T>
double duality_gap(Sampler<T>& s, const SpacePtr<T>& space, const RunConfig& cfg) {
  auto mu = s.measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  auto nu = s.measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  auto primal = solve_wasserstein(mu, nu, Exponent(1));
  if (!primal.certified) return kInf;
  auto dual = kr_dual(mu, nu, KrMethod::IndependentLp);
  double excess = std::max(0.0, scalar::to_double(lipschitz_excess(dual, *space)));
  return std::max(abs_d(T(primal.powered_cost - dual.value)), excess);
}

/// A Dirac pair `(1-c) eta + c delta_y`, `(1-c) eta + c delta_y'`.
template <Scalar T>
DiracPairForm<T> sample_dirac_pair(Sampler<T>& s, const SpacePtr<T>& space, std::size_t max_eta,
                                   bool shared_t, bool allow_c_one = true) {
  const std::size_t k = atom_count(s, max_eta);
  // Distinct t keeps every atom off the segment; distinct base points keep
  // the shared-t pair apart.
  auto pts = s.points(*space, k + 2, !shared_t, shared_t);
  Point<T> y = pts[0];
  Point<T> yp = shared_t ? pts[1].with_t(y.t()) : pts[1];
  const T c = allow_c_one ? scalar::from_ratio<T>(s.integer(1, 20), 20)
                          : scalar::from_ratio<T>(s.integer(1, 19), 20);
  std::optional<DiscreteMeasure<T>> eta;
  if (!(c == T(1))) {
    std::vector<Atom<T>> atoms;
    auto ms = s.masses(k);
    for (std::size_t i = 0; i < k; ++i) atoms.push_back({pts[i + 2], ms[i]});
    eta.emplace(space, std::move(atoms));
  }
  return {std::move(eta), c, std::move(y), std::move(yp)};
}

/// Grid scan over a Dirac pair with distinct t returns only the convex combination.
template <Scalar T>
double ratio_singleton(Sampler<T>& s, const SpacePtr<T>& space, const RunConfig& cfg) {
  const auto& y = require_product(space, "ratio-singleton");
  auto form = sample_dirac_pair(s, space, 3, false);
  if (!segment_is_endpoints_only(y, form.y, form.y_prime)) {
    throw DomainError("ratio-singleton needs alpha < 1 and q > 1");
  }
  const T lambda = scalar::from_ratio<T>(s.integer(1, 99), 100);
  auto [mu, nu] = dirac_pair(form, space);
  auto grid = dirac_pair_grid(form, space, lambda);
  auto report = ratio_set_scan(mu, nu, lambda, grid.candidates(), cfg.tol);
  if (!report.is_singleton()) return kInf;
  const auto& m = report.members.front();
  return std::max(abs_d(m.residual_mu), abs_d(m.residual_nu));
}

/// Ratio sets of pairs violating the Dirac-pair condition contain a second member.
template <Scalar T>
double ratio_witness(Sampler<T>& s, const SpacePtr<T>& space, const RunConfig& cfg,
                     std::size_t trial) {
  const auto& y = require_product(space, "ratio-witness");
  if (trial % 2 == 0) {
    if (y.base()->kind() != SpaceKind::Euclidean) {
      throw KindMismatchError("ratio-witness needs a Euclidean base for segment midpoints");
    }
    auto form = sample_dirac_pair(s, space, 3, true);
    std::vector<T> mid;
    for (std::size_t k = 0; k < form.y.base().coords().size(); ++k) {
      mid.push_back((form.y.base().coords()[k] + form.y_prime.base().coords()[k]) / T(2));
    }
    Point<T> r = Point<T>::product(form.y.t(), Point<T>::euclidean(std::move(mid)));
    auto witness = segment_point_witness(form, space, r);
    auto [mu, nu] = dirac_pair(form, space);
    auto grid = dirac_pair_grid(form, space, witness.lambda);
    grid.inject(witness.xi);
    auto report = ratio_set_scan(mu, nu, witness.lambda, grid.candidates(), cfg.tol);
    if (report.members.size() < 2 || !report.has_other_member) return kInf;
    auto m = ratio_set_membership(witness.xi, mu, nu, witness.lambda, cfg.tol);
    return std::max(abs_d(m.residual_mu), abs_d(m.residual_nu));
  }
  // Disjoint common part, non-Dirac mu' and arbitrary nu'.
  const std::size_t kc = atom_count(s, 2, 0);
  const std::size_t km = atom_count(s, 3, 2);
  const std::size_t kn = atom_count(s, 3, 1);
  auto pts = s.points(*space, kc + km + kn);
  auto take = [&](std::size_t from, std::size_t count) {
    auto ms = s.masses(count);
    std::vector<Atom<T>> atoms;
    for (std::size_t i = 0; i < count; ++i) atoms.push_back({pts[from + i], ms[i]});
    return DiscreteMeasure<T>(space, std::move(atoms));
  };
  auto mu_r = take(kc, km);
  auto nu_r = take(kc + km, kn);
  const T a = kc == 0 ? T(1) : scalar::from_ratio<T>(s.integer(1, 19), 20);
  std::optional<DiscreteMeasure<T>> common;
  if (kc > 0) common = take(0, kc);
  auto build = [&](const DiscreteMeasure<T>& residual) {
    std::vector<std::pair<T, const DiscreteMeasure<T>*>> terms{{a, &residual}};
    if (common) terms.emplace_back(T(T(1) - a), &*common);
    return mix(terms);
  };
  auto mu = build(mu_r), nu = build(nu_r);
  auto witness = residual_split_witness(mu, nu, {mu_r[0].point});
  MixtureGrid<T> grid({mu, nu}, 20);
  grid.inject(witness.xi);
  grid.inject(witness.convex_combination);
  auto report = ratio_set_scan(mu, nu, witness.lambda, grid.candidates(), cfg.tol);
  if (report.members.size() < 2 || !report.has_other_member) return kInf;
  auto m = ratio_set_membership(witness.xi, mu, nu, witness.lambda, cfg.tol);
  return std::max(abs_d(m.residual_mu), abs_d(m.residual_nu));
}

/// Cost additivity of the split along a random subset of supp mu.
template <Scalar T>
double lemma31_additivity(Sampler<T>& s, const SpacePtr<T>& space, const RunConfig& cfg) {
  auto mu = s.measure(space, atom_count(s, support_cap(space, cfg.max_atoms), 2));
  auto nu = s.measure(space, atom_count(s, support_cap(space, cfg.max_atoms)));
  std::vector<Point<T>> set;
  const std::size_t pick = atom_count(s, mu.size() - 1);
  std::vector<std::size_t> idx(mu.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), s.engine());
  for (std::size_t i = 0; i < pick; ++i) set.push_back(mu[idx[i]].point);
  auto split = split_transport(mu, nu, set);
  auto back = mix<T>({{split.lambda, &split.nu1}, {T(T(1) - split.lambda), &split.nu2}});
  if (!(back == nu) && !approx_equal(back, nu, cfg.tol)) return kInf;
  return abs_d(split.residual);
}

/// Constant speed of the left-extended geodesic on ten sample pairs.
template <Scalar T>
double geodesic_extension(Sampler<T>& s, const SpacePtr<T>& space, const RunConfig& cfg) {
  auto form = sample_dirac_pair(s, space, 3, false, false);
  auto ext = make_geodesic_extension(*form.eta, form.y, form.y_prime, form.c);
  const T lo = ext.left_end();
  auto at = [&](const T& u) { return T(lo + u * (T(1) - lo)); };
  std::vector<std::pair<T, T>> samples{{lo, T(1)}, {lo, T(0)}, {T(0), T(1)}};
  while (samples.size() < 10) {
    T a = at(s.unit()), b = at(s.unit());
    if (b < a) std::swap(a, b);
    samples.emplace_back(a, b);
  }
  auto check = geodesic_speed_check(ext, samples, cfg.tol);
  return std::max(check.worst_residual, check.worst_dual_residual);
}

}  // namespace probes

/// Default space of each suite.
inline std::string default_space(std::string_view suite) {
  if (suite == "flip-isometry" || suite == "lemma31-additivity") return "interval";
  if (suite == "fiber-flip-isometry" || suite == "pi-hat-cost") return "product:1/2:2:euclidean:2";
  return "product:1/2:2:euclidean:1";
}

template <Scalar T>
CampaignReport run_suite(std::string_view suite, const RunConfig& cfg) {
  cfg.validate();
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw DomainError("unknown suite '" + std::string(suite) + "'");
  }
  CampaignReport report;
  report.suite = std::string(suite);
  report.config = cfg;
  report.space = cfg.space.empty() ? default_space(suite) : cfg.space;
  SpacePtr<T> space = parse_space_spec<T>(report.space);
  if (suite == "flip-isometry" && !(*space == *MetricSpace<T>::interval())) {
    throw DomainError("flip-isometry runs on the unit interval only");
  }

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < cfg.trials; ++k) {
    TrialRecord rec;
    rec.trial = k;
    rec.seed = trial_seed(cfg.seed, k);
    Sampler<T> s(rec.seed, cfg.sampler());
    double r = 0.0;
    if (suite == "metric-axioms") r = probes::metric_axioms(s, space, cfg);
    else if (suite == "flip-isometry") r = probes::flip_isometry(s, space, cfg);
    else if (suite == "fiber-flip-isometry") r = probes::fiber_flip_isometry(s, space, cfg);
    else if (suite == "pi-hat-cost") r = probes::pi_hat_cost(s, space, cfg);
    else if (suite == "translation-invariance") r = probes::translation_invariance(s, space, cfg);
    else if (suite == "duality-gap") r = probes::duality_gap(s, space, cfg);
    else if (suite == "ratio-singleton") r = probes::ratio_singleton(s, space, cfg);
    else if (suite == "ratio-witness") r = probes::ratio_witness(s, space, cfg, k);
    else if (suite == "lemma31-additivity") r = probes::lemma31_additivity(s, space, cfg);
    else r = probes::geodesic_extension(s, space, cfg);
    rec.residual = r;
    rec.pass = r <= cfg.tol;
    report.pass = report.pass && rec.pass;
    report.max_residual = std::max(report.max_residual, r);
    report.trials.push_back(rec);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline CampaignReport run_suite(std::string_view suite, const RunConfig& cfg) {
  return cfg.mode == Mode::Float ? run_suite<double>(suite, cfg)
                                 : run_suite<Rational>(suite, cfg);
}

/// Space and sampling window of a packaged example.
inline RunConfig scenario_config(std::string_view name, RunConfig cfg) {
  if (name == "example-2-1") {
    cfg.space = "product:1/2:2:euclidean:2";
    cfg.window = 10;
  } else if (name == "example-2-2") {
    cfg.space = "product:1/2:2:euclidean:1";
    cfg.window = 10;
    cfg.nonnegative = true;
  } else if (name == "example-2-3") {
    cfg.space = "product:1:1:interval";
  } else if (name == "example-3-2") {
    cfg.space = "product:1:1:euclidean:2";
  } else {
    throw DomainError("unknown scenario '" + std::string(name) + "'");
  }
  return cfg;
}

/// The flexibility suites (pi-hat cost and fiber-flip isometry) on a packaged example.
inline std::vector<CampaignReport> run_scenario(std::string_view name, const RunConfig& cfg) {
  RunConfig sc = scenario_config(name, cfg);
  return {run_suite("pi-hat-cost", sc), run_suite("fiber-flip-isometry", sc)};
}

}  // namespace wiso

#endif  // WISO_CAMPAIGN_HPP_
