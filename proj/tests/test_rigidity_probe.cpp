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

#include <gtest/gtest.h>

#include "wiso/random.hpp"
#include "wiso/rigidity.hpp"

namespace wiso {
namespace {

using Q = Rational;
using D = double;

SpacePtr<D> strip(Exponent alpha = Exponent(1, 2)) {
  return MetricSpace<D>::product(alpha, Exponent(2), MetricSpace<D>::euclidean(1));
}
Point<D> y(D t, D x) { return Point<D>::product(t, Point<D>::euclidean({x})); }
Point<Q> t(Q v) { return Point<Q>::interval(v); }

TEST(DiracPairForm, DetectsTheThreeShapes) {
  auto line = MetricSpace<Q>::interval();
  auto a = t(Q(0)), b = t(Q(1, 4)), c = t(Q(1, 2)), d = t(Q(1));

  auto f = detect_dirac_pair_form(DiscreteMeasure<Q>::dirac(line, a), DiscreteMeasure<Q>::dirac(line, d));
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->c, Q(1));
  EXPECT_FALSE(f->eta.has_value());

  DiscreteMeasure<Q> mu(line, {{c, Q(1, 2)}, {a, Q(1, 2)}});
  DiscreteMeasure<Q> nu(line, {{c, Q(1, 2)}, {d, Q(1, 2)}});
  f = detect_dirac_pair_form(mu, nu);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->c, Q(1, 2));
  EXPECT_EQ(*f->eta, DiscreteMeasure<Q>::dirac(line, c));
  EXPECT_EQ(f->y, a);
  EXPECT_EQ(f->y_prime, d);
  auto [m2, n2] = dirac_pair(*f, line);
  EXPECT_EQ(m2, mu);
  EXPECT_EQ(n2, nu);

  EXPECT_FALSE(detect_dirac_pair_form(DiscreteMeasure<Q>(line, {{a, Q(1, 2)}, {b, Q(1, 2)}}),
                                      DiscreteMeasure<Q>(line, {{c, Q(1, 2)}, {d, Q(1, 2)}})));
  EXPECT_THROW(detect_dirac_pair_form(mu, mu), DomainError);
}

TEST(RatioSet, MembershipExamples) {
  auto s = strip();
  DiscreteMeasure<D> eta(s, {{y(0.3, 1), 1.0}});
  DiracPairForm<D> form{eta, 0.4, y(0.1, 0), y(0.8, 0.5)};
  auto [mu, nu] = dirac_pair(form, s);
  EXPECT_TRUE(ratio_set_membership(convex_combine(0.3, mu, nu), mu, nu, 0.3).member);
  auto self = ratio_set_membership(mu, mu, nu, 0.3);
  EXPECT_FALSE(self.member);
  EXPECT_LT(self.residual_mu, 0.0);
  EXPECT_THROW(ratio_set_membership(mu, mu, nu, 1.0), DomainError);
  EXPECT_THROW(ratio_set_membership(mu, mu, mu, 0.5), DomainError);
}

TEST(RatioSet, SharedTSegmentPointIsAWitness) {
  auto s = strip();
  DiscreteMeasure<D> eta(s, {{y(0.9, -3), 1.0}});
  DiracPairForm<D> form{eta, 0.5, y(0.5, 0), y(0.5, 2)};
  auto w = segment_point_witness(form, s, y(0.5, 1));
  EXPECT_DOUBLE_EQ(w.lambda, 0.5);
  auto [mu, nu] = dirac_pair(form, s);
  EXPECT_TRUE(ratio_set_membership(w.xi, mu, nu, w.lambda).member);
  EXPECT_FALSE(approx_equal(w.xi, w.convex_combination, 1e-9));

  auto grid = dirac_pair_grid(form, s, w.lambda);
  grid.inject(w.xi);
  auto report = ratio_set_scan(mu, nu, w.lambda, grid.candidates(), 1e-8);
  EXPECT_GE(report.members.size(), 2u);
  EXPECT_TRUE(report.has_other_member);
  EXPECT_TRUE(report.convex_combination_included);
  EXPECT_FALSE(report.is_singleton());
}

TEST(RatioSet, DistinctTPairsGiveSingletonScans) {
  for (Exponent alpha : {Exponent(1, 2), Exponent(9, 10)}) {
    auto s = strip(alpha);
    Sampler<D> smp(31);
    for (int k = 0; k < 10; ++k) {
      auto pts = smp.points(*s, 3, true, false);
      DiracPairForm<D> form{DiscreteMeasure<D>::dirac(s, pts[2]), 0.35, pts[0], pts[1]};
      auto [mu, nu] = dirac_pair(form, s);
      const double lambda = 0.37;
      auto report = ratio_set_scan(mu, nu, lambda, dirac_pair_grid(form, s, lambda).candidates(), 1e-8);
      EXPECT_TRUE(report.is_singleton()) << mu.str() << " / " << nu.str();
      EXPECT_EQ(report.candidates_examined, 232u);
    }
  }
}

TEST(RatioSet, ResidualSplitWitnessOnTheLine) {
  auto line = MetricSpace<Q>::interval();
  DiscreteMeasure<Q> mu(line, {{t(Q(0)), Q(1, 2)}, {t(Q(1, 4)), Q(1, 2)}});
  DiscreteMeasure<Q> nu(line, {{t(Q(1, 2)), Q(1, 2)}, {t(Q(1)), Q(1, 2)}});
  ASSERT_FALSE(detect_dirac_pair_form(mu, nu));
  auto w = residual_split_witness(mu, nu, {t(Q(0))});
  auto m = ratio_set_membership(w.xi, mu, nu, w.lambda);
  EXPECT_TRUE(m.member);
  EXPECT_EQ(m.residual_mu, Q(0));
  EXPECT_EQ(m.residual_nu, Q(0));
  EXPECT_NE(w.xi, w.convex_combination);
}

TEST(RatioSet, ScanNeedsCandidates) {
  auto line = MetricSpace<Q>::interval();
  auto a = DiscreteMeasure<Q>::dirac(line, t(Q(0)));
  auto b = DiscreteMeasure<Q>::dirac(line, t(Q(1)));
  EXPECT_THROW(ratio_set_scan(a, b, Q(1, 2), {}), DomainError);
  EXPECT_THROW(MixtureGrid<Q>({}, 4), DomainError);
  EXPECT_EQ(MixtureGrid<Q>({a, b}, 4).candidates().size(), 5u);
}

TEST(SplitTransport, RestrictionAndAdditivity) {
  auto line = MetricSpace<Q>::interval();
  auto a = t(Q(0)), b = t(Q(1, 4));
  DiscreteMeasure<Q> mu(line, {{a, Q(1, 2)}, {b, Q(1, 2)}});
  auto nu = DiscreteMeasure<Q>::dirac(line, t(Q(3, 4)));
  auto r = split_transport(mu, nu, {a});
  EXPECT_EQ(r.lambda, Q(1, 2));
  EXPECT_EQ(r.mu1, DiscreteMeasure<Q>::dirac(line, a));
  EXPECT_EQ(r.nu1, nu);
  EXPECT_EQ(r.residual, Q(0));
  EXPECT_THROW(split_transport(mu, nu, {a, b}), DomainError);
  EXPECT_THROW(split_transport(mu, nu, {t(Q(1))}), DomainError);
}

TEST(SplitTransport, ExactOnRandomFiniteInstances) {
  auto space = MetricSpace<Q>::finite({Q(0), Q(2), Q(3), Q(4), Q(2), Q(0), Q(2), Q(3), Q(3), Q(2),
                                       Q(0), Q(2), Q(4), Q(3), Q(2), Q(0)},
                                      4);
  for (std::uint64_t k = 0; k < 40; ++k) {
    Sampler<Q> s(trial_seed(8, k));
    auto mu = s.measure(space, 3), nu = s.measure(space, 3);
    auto r = split_transport(mu, nu, {mu[0].point});
    EXPECT_EQ(r.residual, Q(0));
    EXPECT_EQ(convex_combine(Q(Q(1) - r.lambda), r.mu1, r.mu2), mu);
  }
}

TEST(OptimalPlan, SolverMatchesPiStar) {
  for (Exponent alpha : {Exponent(1, 2), Exponent(9, 10)}) {
    auto s = strip(alpha);
    Sampler<D> smp(41);
    for (int k = 0; k < 20; ++k) {
      auto pts = smp.points(*s, 4, true, false);
      DiscreteMeasure<D> eta(s, {{pts[2], 0.25}, {pts[3], 0.75}});
      DiracPairForm<D> form{eta, 0.05 * (1 + k % 19), pts[0], pts[1]};
      auto [mu, nu] = dirac_pair(form, s);
      auto star = pi_star(form, s);
      auto sol = solve_wasserstein(mu, nu);
      EXPECT_LE(coupling_difference(sol.coupling, star), 1e-9);
      EXPECT_LE(dual_slackness_residual(star, *s, form.y), 1e-12);
      EXPECT_NEAR(sol.powered_cost, form.c * s->distance(form.y, form.y_prime), 1e-12);
    }
  }
}

class GeodesicTest : public ::testing::Test {
 protected:
  SpacePtr<D> s = strip();
  GeodesicExtension<D> ext = make_geodesic_extension(DiscreteMeasure<D>::dirac(s, y(0.7, 1)), y(0.2, 0),
                                                     y(0.9, -1), 0.4);
};

TEST_F(GeodesicTest, Endpoints) {
  EXPECT_TRUE(approx_equal(extend_geodesic(ext, ext.left_end()), DiscreteMeasure<D>::dirac(s, y(0.2, 0)), 1e-12));
  DiscreteMeasure<D> at0(s, {{y(0.2, 0), 0.4}, {y(0.7, 1), 0.6}});
  EXPECT_TRUE(approx_equal(extend_geodesic(ext, 0.0), at0, 1e-12));
  DiscreteMeasure<D> at1(s, {{y(0.9, -1), 0.4}, {y(0.7, 1), 0.6}});
  EXPECT_TRUE(approx_equal(extend_geodesic(ext, 1.0), at1, 1e-12));
  EXPECT_THROW(extend_geodesic(ext, 1.5), DomainError);
  EXPECT_THROW(extend_geodesic(ext, ext.left_end() - 0.1), DomainError);
}

TEST_F(GeodesicTest, ConstantSpeedAcrossZero) {
  const double lo = ext.left_end();
  std::vector<std::pair<D, D>> pairs{{0.1, 0.8}, {0.0, 1.0}, {lo, 1.0}, {lo, 0.0}, {lo / 2, 0.5}, {0.3, 0.3}};
  auto check = geodesic_speed_check(ext, pairs);
  EXPECT_TRUE(check.pass) << check.worst_residual << " " << check.worst_dual_residual;
  EXPECT_THROW(geodesic_speed_check(ext, {{0.5, 0.1}}), DomainError);
}

TEST_F(GeodesicTest, RejectsDegenerateData) {
  auto eta = DiscreteMeasure<D>::dirac(s, y(0.7, 1));
  EXPECT_THROW(make_geodesic_extension(eta, y(0.2, 0), y(0.9, -1), 1.0), DomainError);
  EXPECT_THROW(make_geodesic_extension(eta, y(0.2, 0), y(0.2, 0), 0.5), DomainError);
  EXPECT_THROW(make_geodesic_extension(eta, y(0.7, 1), y(0.2, 0), 0.5), DomainError);
}

TEST(InductionFamily, DeterministicStreams) {
  auto s = strip();
  InductionFamily<D> a(s, 3, 99), b(s, 3, 99), single(s, 1, 5);
  for (int k = 0; k < 10; ++k) {
    auto m = a.next();
    EXPECT_EQ(m, b.next());
    EXPECT_EQ(m.size(), 3u);
    EXPECT_TRUE(single.next().is_dirac());
  }
  EXPECT_THROW(InductionFamily<D>(MetricSpace<D>::interval(), 3, 1), KindMismatchError);
}

TEST(InductionFamily, StepRebuildsTheMeasureExactly) {
  auto s = MetricSpace<Q>::product(Exponent(1, 2), Exponent(2), MetricSpace<Q>::euclidean(1));
  InductionFamily<Q> fam(s, 4, 3);
  for (int k = 0; k < 20; ++k) {
    auto mu = fam.next();
    auto step = induction_step(mu);
    EXPECT_EQ(convex_combine(step.ratio, step.mu1, step.mu2), mu);
    EXPECT_EQ(step.weight + step.ratio, Q(1));
  }
}

TEST(InductionFamily, StepPairHasASingletonScan) {
  auto s = strip(Exponent(9, 10));
  InductionFamily<D> fam(s, 3, 12);
  for (int k = 0; k < 5; ++k) {
    auto mu = fam.next();
    auto step = induction_step(mu);
    auto grid = dirac_pair_grid(step.form, s, step.ratio);
    auto report = ratio_set_scan(step.mu1, step.mu2, step.ratio, grid.candidates(), 1e-8);
    EXPECT_TRUE(report.is_singleton());
    EXPECT_TRUE(approx_equal(report.members.front().measure, mu, 1e-9));
  }
}

}  // namespace
}  // namespace wiso
