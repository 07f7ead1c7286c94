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

#include "wiso/measure.hpp"
#include "wiso/random.hpp"

namespace wiso {
namespace {

using Q = Rational;

class MeasureTest : public ::testing::Test {
 protected:
  SpacePtr<Q> line = MetricSpace<Q>::interval();
  SpacePtr<Q> strip = MetricSpace<Q>::product(Exponent(1, 2), Exponent(2), MetricSpace<Q>::euclidean(1));

  Point<Q> t(Q v) { return Point<Q>::interval(v); }
  Point<Q> y(Q tv, Q x) { return Point<Q>::product(tv, Point<Q>::euclidean({x})); }
  DiscreteMeasure<Q> m(std::vector<Atom<Q>> atoms) { return DiscreteMeasure<Q>(line, std::move(atoms)); }
};

TEST_F(MeasureTest, CanonicalFormMergesAndSorts) {
  auto mu = m({{t(Q(1, 2)), Q(1, 4)}, {t(Q(0)), Q(1, 2)}, {t(Q(1, 2)), Q(1, 4)}, {t(Q(1)), Q(0)}});
  ASSERT_EQ(mu.size(), 2u);
  EXPECT_EQ(mu[0].point, t(Q(0)));
  EXPECT_EQ(mu[1].mass, Q(1, 2));
  EXPECT_EQ(mu.mass_of(t(Q(1))), Q(0));
}

TEST_F(MeasureTest, RejectsInvalidMasses) {
  EXPECT_THROW(m({{t(Q(0)), Q(3, 2)}, {t(Q(1)), Q(-1, 2)}}), DomainError);
  EXPECT_THROW(m({{t(Q(0)), Q(1, 2)}}), DomainError);
  EXPECT_THROW(m({}), DomainError);
  EXPECT_THROW(m({{t(Q(2)), Q(1)}}), DomainError);
}

TEST_F(MeasureTest, FloatMassesBelowTheFloorAreRejected) {
  auto s = MetricSpace<double>::interval();
  using A = Atom<double>;
  EXPECT_THROW(DiscreteMeasure<double>(s, {A{Point<double>::interval(0.0), 1.0},
                                            A{Point<double>::interval(1.0), 1e-17}}),
               DomainError);
}

TEST_F(MeasureTest, ConvexCombinationConvention) {
  auto mu = DiscreteMeasure<Q>::dirac(line, t(Q(0)));
  auto nu = DiscreteMeasure<Q>::dirac(line, t(Q(1)));
  auto xi = convex_combine(Q(1, 4), mu, nu);
  EXPECT_EQ(xi.mass_of(t(Q(0))), Q(3, 4));
  EXPECT_EQ(xi.mass_of(t(Q(1))), Q(1, 4));
  EXPECT_THROW(convex_combine(Q(2), mu, nu), DomainError);
}

TEST_F(MeasureTest, MixRequiresOneSpace) {
  auto mu = DiscreteMeasure<Q>::dirac(line, t(Q(0)));
  auto other = DiscreteMeasure<Q>::dirac(strip, y(Q(0), Q(0)));
  EXPECT_THROW((mix<Q>({{Q(1, 2), &mu}, {Q(1, 2), &other}})), KindMismatchError);
}

TEST_F(MeasureTest, PushForwardMergesImages) {
  auto mu = m({{t(Q(1, 5)), Q(1, 2)}, {t(Q(4, 5)), Q(1, 2)}});
  auto folded = push_forward<Q>(
      [](const Point<Q>& p) { return Point<Q>::interval(p.t() > Q(1, 2) ? Q(1) - p.t() : p.t()); },
      mu);
  EXPECT_TRUE(folded.is_dirac());
  EXPECT_EQ(folded[0].point, t(Q(1, 5)));
}

TEST_F(MeasureTest, DisintegrationOfASharedFiber) {
  DiscreteMeasure<Q> mu(strip, {{y(Q(1, 5), Q(3)), Q(1, 2)}, {y(Q(4, 5), Q(3)), Q(1, 2)}});
  auto d = disintegrate(mu);
  ASSERT_TRUE(d.marginal.is_dirac());
  EXPECT_EQ(d.marginal[0].point, Point<Q>::euclidean({Q(3)}));
  ASSERT_EQ(d.conditionals.size(), 1u);
  EXPECT_EQ(d.conditionals[0].mass_of(t(Q(1, 5))), Q(1, 2));
  EXPECT_EQ(d.conditionals[0].mass_of(t(Q(4, 5))), Q(1, 2));
  EXPECT_EQ(d.conditionals[0].space()->alpha(), Exponent(1, 2));
  EXPECT_EQ(reassemble(d, strip), mu);
}

TEST_F(MeasureTest, DistinctBasePointsGiveDiracConditionals) {
  Sampler<Q> s(11);
  for (int k = 0; k < 50; ++k) {
    auto mu = s.fiber_injective_measure(strip, 5);
    auto d = disintegrate(mu);
    EXPECT_EQ(d.conditionals.size(), mu.size());
    for (const auto& c : d.conditionals) EXPECT_TRUE(c.is_dirac());
    EXPECT_EQ(reassemble(d, strip), mu);
  }
}

TEST_F(MeasureTest, DisintegrateNeedsAProductSpace) {
  EXPECT_THROW(disintegrate(DiscreteMeasure<Q>::dirac(line, t(Q(0)))), KindMismatchError);
}

TEST_F(MeasureTest, MeetIsTheAtomwiseMinimum) {
  auto a = t(Q(0)), b = t(Q(1, 2)), c = t(Q(1));
  auto mu = m({{a, Q(1, 2)}, {b, Q(1, 2)}});
  auto nu = m({{b, Q(1, 2)}, {c, Q(1, 2)}});
  auto w = meet(mu, nu);
  EXPECT_EQ(w.total_mass(), Q(1, 2));
  EXPECT_EQ(w.mass_of(b), Q(1, 2));
  EXPECT_EQ(w.size(), 1u);
}

TEST_F(MeasureTest, ResidualDecomposition) {
  auto a = t(Q(0)), b = t(Q(1, 2)), c = t(Q(1));
  auto mu = m({{a, Q(1, 2)}, {b, Q(1, 2)}});
  auto nu = m({{b, Q(1, 2)}, {c, Q(1, 2)}});
  auto dec = residual_decompose(mu, nu);
  ASSERT_TRUE(std::holds_alternative<ResidualSplit<Q>>(dec));
  const auto& s = std::get<ResidualSplit<Q>>(dec);
  EXPECT_EQ(s.a, Q(1, 2));
  ASSERT_TRUE(s.common.has_value());
  EXPECT_EQ(*s.common, DiscreteMeasure<Q>::dirac(line, b));
  EXPECT_EQ(s.mu_residual, DiscreteMeasure<Q>::dirac(line, a));
  EXPECT_EQ(s.nu_residual, DiscreteMeasure<Q>::dirac(line, c));
}

TEST_F(MeasureTest, ResidualDecompositionOfSingularAndEqualPairs) {
  auto mu = DiscreteMeasure<Q>::dirac(line, t(Q(0)));
  auto nu = DiscreteMeasure<Q>::dirac(line, t(Q(1)));
  auto dec = residual_decompose(mu, nu);
  const auto& s = std::get<ResidualSplit<Q>>(dec);
  EXPECT_EQ(s.a, Q(1));
  EXPECT_FALSE(s.common.has_value());
  EXPECT_TRUE(std::holds_alternative<IdenticalMeasures>(residual_decompose(mu, mu)));
}

TEST_F(MeasureTest, RestrictionKeepsUnnormalizedMass) {
  auto mu = m({{t(Q(0)), Q(1, 3)}, {t(Q(1)), Q(2, 3)}});
  auto r = restrict_to(mu, {t(Q(1))});
  EXPECT_EQ(r.total_mass(), Q(2, 3));
  EXPECT_EQ(r.normalized(), DiscreteMeasure<Q>::dirac(line, t(Q(1))));
  EXPECT_TRUE(restrict_to(mu, {t(Q(1, 2))}).is_null());
}

TEST_F(MeasureTest, ApproximateEqualityInFloatMode) {
  auto s = MetricSpace<double>::interval();
  using A = Atom<double>;
  DiscreteMeasure<double> a(s, {A{Point<double>::interval(0.1), 0.5}, A{Point<double>::interval(0.7), 0.5}});
  DiscreteMeasure<double> b(s, {A{Point<double>::interval(0.1 + 1e-13), 0.5 - 1e-13},
                                A{Point<double>::interval(0.7), 0.5 + 1e-13}});
  EXPECT_TRUE(approx_equal(a, b, 1e-9));
  EXPECT_FALSE(a == b);
}

}  // namespace
}  // namespace wiso
