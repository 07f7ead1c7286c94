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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "wiso/metric.hpp"
#include "wiso/random.hpp"

namespace wiso {
namespace {

using Q = Rational;

Point<double> P1(double t, double x) { return Point<double>::product(t, Point<double>::euclidean({x})); }
Point<Q> PQ(Q t, Q x) { return Point<Q>::product(t, Point<Q>::euclidean({x})); }

TEST(Scalar, ParsesDecimalsAndFractionsExactly) {
  EXPECT_EQ(*parse_rational("0.25"), Q(1, 4));
  EXPECT_EQ(*parse_rational("-3/6"), Q(-1, 2));
  EXPECT_EQ(*parse_rational("1e-2"), Q(1, 100));
  EXPECT_EQ(*parse_rational("7"), Q(7));
  EXPECT_FALSE(parse_rational("1/0"));
  EXPECT_FALSE(parse_rational("abc"));
  EXPECT_FALSE(parse_rational(""));
}

TEST(Scalar, ExactPowersAndInexactRoots) {
  EXPECT_EQ(ScalarTraits<Q>::power(Q(9, 4), Exponent(1, 2)), Q(3, 2));
  EXPECT_EQ(ScalarTraits<Q>::power(Q(2, 3), Exponent(3)), Q(8, 27));
  EXPECT_THROW(ScalarTraits<Q>::power(Q(2), Exponent(1, 2)), InexactError);
  EXPECT_DOUBLE_EQ(ScalarTraits<double>::power(2.0, Exponent(1, 2)), std::sqrt(2.0));
}

TEST(Scalar, ExponentIsACanonicalPositiveFraction) {
  EXPECT_EQ(Exponent(2, 4), Exponent(1, 2));
  EXPECT_EQ(Exponent::parse("0.5"), Exponent(1, 2));
  EXPECT_EQ(Exponent(1, 2) * Exponent(2), Exponent(1));
  EXPECT_THROW(Exponent(0), DomainError);
  EXPECT_THROW(Exponent::parse("-1"), DomainError);
}

TEST(Interval, SnowflakeDistance) {
  auto s = MetricSpace<double>::interval(Exponent(1, 2));
  EXPECT_DOUBLE_EQ(s->distance(Point<double>::interval(0.0), Point<double>::interval(0.25)), 0.5);
  auto one = MetricSpace<Q>::interval();
  EXPECT_EQ(one->distance(Point<Q>::interval(Q(1, 5)), Point<Q>::interval(Q(7, 10))), Q(1, 2));
}

TEST(Interval, RejectsAlphaAboveOneAndPointsOutside) {
  EXPECT_THROW(MetricSpace<double>::interval(Exponent(3, 2)), DomainError);
  auto s = MetricSpace<double>::interval();
  EXPECT_FALSE(s->contains(Point<double>::interval(1.5)));
  EXPECT_THROW(distance(*s, Point<double>::interval(1.5), Point<double>::interval(0.0)), DomainError);
}

TEST(Euclidean, DistanceAndKindChecks) {
  auto e = MetricSpace<double>::euclidean(2);
  auto a = Point<double>::euclidean({0.0, 0.0}), b = Point<double>::euclidean({3.0, 4.0});
  EXPECT_DOUBLE_EQ(e->distance(a, b), 5.0);
  EXPECT_THROW(distance(*e, a, Point<double>::interval(0.5)), KindMismatchError);
  EXPECT_THROW(distance(*e, a, Point<double>::euclidean({1.0})), KindMismatchError);
}

TEST(Finite, ValidatesTheMatrix) {
  EXPECT_NO_THROW(MetricSpace<Q>::finite({Q(0), Q(1), Q(1), Q(0)}, 2));
  EXPECT_THROW(MetricSpace<Q>::finite({Q(0), Q(1), Q(2), Q(0)}, 2), DomainError);  // asymmetric
  EXPECT_THROW(MetricSpace<Q>::finite({Q(1), Q(1), Q(1), Q(0)}, 2), DomainError);  // diagonal
  EXPECT_THROW(MetricSpace<Q>::finite({Q(0), Q(0), Q(0), Q(0)}, 2), DomainError);  // separation
  // 0-1: 5 > 0-2 + 2-1 = 2.
  EXPECT_THROW(MetricSpace<Q>::finite({Q(0), Q(5), Q(1), Q(5), Q(0), Q(1), Q(1), Q(1), Q(0)}, 3),
               DomainError);
}

TEST(Finite, ParserReportsLineAndColumn) {
  std::istringstream good("3\n0 1 2\n1 0 1\n2 1 0\n");
  auto s = parse_finite_space<Q>(good);
  EXPECT_EQ(s->size(), 3u);
  EXPECT_EQ(s->entry(0, 2), Q(2));

  std::istringstream bad("2\n0 1\n1 zz\n");
  try {
    parse_finite_space<Q>(bad);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 3u);
  }
}

TEST(Product, HandSubstitutedDistance) {
  // (0.25^(0.5*2) + 1)^(1/2) = sqrt(1.25).
  auto y = MetricSpace<double>::product(Exponent(1, 2), Exponent(2), MetricSpace<double>::euclidean(1));
  EXPECT_NEAR(y->distance(P1(0, 0), P1(0.25, 1)), std::sqrt(1.25), 1e-15);
  EXPECT_NEAR(y->distance(P1(0, 0), P1(0.25, 1)), 1.1180339887, 1e-10);
}

TEST(Product, ExactWhenRootsAreRational) {
  auto y = MetricSpace<Q>::product(Exponent(1, 2), Exponent(2), MetricSpace<Q>::euclidean(1));
  // sqrt(|9/25| + (4/5)^2 ... ) : |dt|^1 = 9/25, dx^2 = 16/25, sum 1.
  EXPECT_EQ(y->distance(PQ(Q(0), Q(0)), PQ(Q(9, 25), Q(4, 5))), Q(1));
  EXPECT_EQ(y->powered_distance(PQ(Q(0), Q(0)), PQ(Q(1, 5), Q(1)), Exponent(2)), Q(6, 5));
}

TEST(Product, RejectsParametersOutsideTheirRange) {
  auto base = MetricSpace<double>::euclidean(1);
  EXPECT_THROW(MetricSpace<double>::product(Exponent(2), Exponent(2), base), DomainError);
  EXPECT_THROW(MetricSpace<double>::product(Exponent(1, 2), Exponent(1, 2), base), DomainError);
}

TEST(TriangleDefect, SnowflakeFiberIsStrictlyConcave) {
  auto y = MetricSpace<double>::product(Exponent(1, 2), Exponent(2), MetricSpace<double>::euclidean(1));
  // 0.5^0.5 + 0.5^0.5 - 1.
  EXPECT_NEAR(triangle_defect(*y, P1(0, 3), P1(0.5, 3), P1(1, 3)), std::sqrt(2.0) - 1, 1e-12);
  EXPECT_NEAR(triangle_defect(*y, P1(0, 3), P1(0.5, 3), P1(1, 3)), 0.4142, 1e-4);
}

TEST(TriangleDefect, VanishesOnSharedTAndCollinearBase) {
  auto y = MetricSpace<Q>::product(Exponent(1, 2), Exponent(2), MetricSpace<Q>::euclidean(1));
  EXPECT_EQ(triangle_defect(*y, PQ(Q(1, 3), Q(0)), PQ(Q(1, 3), Q(1)), PQ(Q(1, 3), Q(3))), Q(0));
}

TEST(Segment, EndpointsOnlyWhenTDiffersAndQAboveOne) {
  auto y = MetricSpace<double>::product(Exponent(1, 2), Exponent(2), MetricSpace<double>::euclidean(1));
  std::vector<Point<double>> grid;
  for (int i = 0; i <= 10; ++i) {
    for (int j = -5; j <= 15; ++j) grid.push_back(P1(i / 10.0, j / 5.0));
  }
  auto seg = metric_segment(*y, P1(0, 0), P1(1, 2), grid);
  ASSERT_EQ(seg.size(), 2u);
  EXPECT_TRUE(segment_is_endpoints_only(*y, P1(0, 0), P1(1, 2)));
  EXPECT_FALSE(segment_is_endpoints_only(*y, P1(0.5, 0), P1(0.5, 2)));
}

TEST(Segment, SharedTIncludesTheBaseMidpoint) {
  auto y = MetricSpace<double>::product(Exponent(1, 2), Exponent(1), MetricSpace<double>::euclidean(1));
  auto seg = metric_segment(*y, P1(0.5, 0), P1(0.5, 2), {P1(0.5, 1), P1(0.4, 1)});
  ASSERT_EQ(seg.size(), 3u);
  EXPECT_TRUE(seg[1] == P1(0.5, 1) || seg[0] == P1(0.5, 1) || seg[2] == P1(0.5, 1));
}

// With q = 1 the base contributes additively, so a geodesic base saturates
// the triangle inequality even when the t coordinates differ.
TEST(Segment, LinearProductSaturatesAcrossDistinctT) {
  auto y = MetricSpace<Q>::product(Exponent(1, 2), Exponent(1), MetricSpace<Q>::euclidean(1));
  EXPECT_EQ(triangle_defect(*y, PQ(Q(0), Q(0)), PQ(Q(0), Q(1)), PQ(Q(1), Q(2))), Q(0));
  auto seg = metric_segment(*y, PQ(Q(0), Q(0)), PQ(Q(1), Q(2)), {PQ(Q(0), Q(1))});
  EXPECT_EQ(seg.size(), 3u);
  EXPECT_FALSE(segment_is_endpoints_only(*y, PQ(Q(0), Q(0)), PQ(Q(1), Q(2))));
}

TEST(Segment, EmptyCandidateListIsAnError) {
  auto s = MetricSpace<double>::interval();
  EXPECT_THROW(metric_segment(*s, Point<double>::interval(0.0), Point<double>::interval(1.0), {}),
               DomainError);
}

TEST(Axioms, SampledTriplesOnSeveralSpaces) {
  std::vector<SpacePtr<double>> spaces{
      MetricSpace<double>::interval(Exponent(1, 2)),
      MetricSpace<double>::euclidean(3),
      MetricSpace<double>::product(Exponent(1, 2), Exponent(2), MetricSpace<double>::euclidean(2)),
      MetricSpace<double>::product(Exponent(9, 10), Exponent(3), MetricSpace<double>::interval())};
  for (const auto& space : spaces) {
    Sampler<double> s(7);
    for (int k = 0; k < 300; ++k) {
      auto a = s.point(*space), b = s.point(*space), c = s.point(*space);
      EXPECT_EQ(space->distance(a, a), 0.0);
      EXPECT_EQ(space->distance(a, b), space->distance(b, a));
      if (!(a == b)) {
        EXPECT_GT(space->distance(a, b), 0.0);
      }
      EXPECT_GE(triangle_defect(*space, a, b, c), 0.0);
    }
  }
}

TEST(Points, OrderingAndFormatting) {
  auto a = Point<Q>::product(Q(1, 2), Point<Q>::finite(3));
  auto b = Point<Q>::product(Q(1, 2), Point<Q>::finite(4));
  EXPECT_LT(a, b);
  EXPECT_EQ(a.with_t(Q(0)).t(), Q(0));
  EXPECT_EQ(Point<Q>::interval(Q(1, 4)).str(), "1/4");
}

}  // namespace
}  // namespace wiso
