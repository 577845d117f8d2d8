#include "fixtures.hpp"

#include "mapcalc/charts.hpp"
#include "mapcalc/errors.hpp"
#include "mapcalc/optimizer.hpp"
#include "mapcalc/topology.hpp"

#include <gtest/gtest.h>

using namespace mapcalc;
using namespace fixtures;

namespace {

constexpr int kRes = 64;

// f bent by a section of sup 0.05.
MapPtr neighbour(const MapPtr& f, Rng& rng) {
  return share(chart_inverse(random_section(f, 0.06, 0.05 / 0.06, rng)));
}

}  // namespace

TEST(ChartForward, OfItselfIsZero) {
  Rng rng(1);
  MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
  EXPECT_EQ(chart_forward(f, *f, default_delta(*f)).sup_norm(), 0.0);
}

TEST(ChartForward, ConstantMapsGiveTheConstantLog) {
  TargetManifold m = sphere();
  Point p0 = m.make_point(vec({0, 0, 1}));
  Point q0 = exp_map(m, {p0, vec({0.1, -0.05, 0})});
  MapPtr f = share(constant_map(m, kRes, p0));
  PullbackSection s = chart_forward(f, constant_map(m, kRes, q0), default_delta(*f));
  Vector expected = log_map(m, p0, q0).vec;
  for (int c = 0; c < 2; ++c)
    for (int node = 0; node < f->grid(c).node_count(); ++node)
      EXPECT_LT((s.at(c, node).vec - expected).norm(), 1e-15);
  EXPECT_EQ(s.bound(), default_delta(*f));
}

TEST(ChartForward, ExpOfTheSectionRecoversG) {
  Rng rng(2);
  MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
  double delta = default_delta(*f);
  SampledMap g = chart_inverse(random_section(f, delta, 0.9, rng));
  PullbackSection s = chart_forward(f, g, delta);
  double worst = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int node = 0; node < f->grid(c).node_count(); ++node)
      worst = std::max(worst, (exp_map(f->target(), s.at(c, node)).coords -
                               g.value(c, node).coords).norm());
  EXPECT_LT(worst, 1e-10);
}

TEST(ChartForward, AntipodalLoopIsRejected) {
  TargetManifold m = sphere();
  MapPtr f = share(great_circle(m, kRes));
  SampledMap g = great_circle(m, kRes, -Eigen::Matrix3d::Identity());
  EXPECT_THROW(chart_forward(f, g, 0.5 * kPi), WellDefinednessViolated);
}

TEST(ChartForward, DeltaMustBeBelowInjectivityRadius) {
  TargetManifold m = sphere();
  MapPtr f = share(great_circle(m, kRes));
  EXPECT_THROW(chart_forward(f, *f, kPi), InvalidArgument);
  EXPECT_THROW(chart_forward(f, *f, 0.0), InvalidArgument);
  EXPECT_NEAR(default_delta(*f), 0.4 * kPi / 6.0, 1e-15);
}

TEST(ChartInverse, ZeroSectionGivesF) {
  Rng rng(3);
  MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
  EXPECT_TRUE(chart_inverse(*f, PullbackSection::zero(f, 0.2)) == *f);
}

TEST(ChartInverse, TorusConstantSectionTranslates) {
  TargetManifold m = torus();
  Vector zero = Vector::Zero(2);
  MapPtr f = share(torus_loop(m, kRes, zero, vec({1, 0}), zero));
  PullbackSection s =
      PullbackSection::from_field(f, 3.0, [](const Vector&, const Point&) { return vec({0, 2.5}); });
  SampledMap g = chart_inverse(s);
  EXPECT_LT(max_node_distance(g, torus_loop(m, kRes, vec({0, 2.5}), vec({1, 0}), zero)), 1e-14);
}

TEST(ChartInverse, BaseMismatchAndBound) {
  Rng rng(4);
  MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
  MapPtr g = share(random_sphere_map(sphere(), kRes, rng));
  PullbackSection s = random_section(g, 0.2, 0.5, rng);
  EXPECT_THROW(chart_inverse(*f, s), BaseMismatch);
  PullbackSection big = random_section(f, 0.2, 0.5, rng).with_bound(0.05);
  EXPECT_THROW(chart_inverse(big), WellDefinednessViolated);
}

TEST(ChartRoundTrip, SectionsSurviveInverseThenForward) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
    PullbackSection s = random_section(f, 0.3, uniform(rng, 0.1, 0.95), rng);
    PullbackSection back = chart_forward(f, chart_inverse(*f, s), s.bound());
    EXPECT_LT(section_norm(back - s, 0).total, 1e-9);
    EXPECT_LT(section_norm(back - s, 2).total, 1e-5);
  }
}

TEST(ChartRoundTrip, MapsSurviveForwardThenInverse) {
  Rng rng(6);
  for (bool on_sphere : {true, false}) {
    TargetManifold m = on_sphere ? sphere() : torus();
    for (int t = 0; t < 20; ++t) {
      MapPtr f = share(on_sphere ? random_sphere_map(m, kRes, rng) : random_torus_map(m, kRes, rng));
      double delta = default_delta(*f);
      SampledMap g = chart_inverse(random_section(f, delta, uniform(rng, 0.1, 0.9), rng));
      SampledMap back = chart_inverse(chart_forward(f, g, delta));
      EXPECT_LT(max_node_distance(g, back), 1e-12);
      EXPECT_LT(ck_distance(g, back, 2), 1e-5);
    }
  }
}

TEST(ChartHomeomorphism, ForwardAndInverseAreLinearlyControlled) {
  // For g_t = phi_f^-1(t u): |phi_f(g_t)|_{C^k} <= C ck_distance(f, g_t) and
  // ck_distance(f, phi_f^-1(s_t)) <= C' |s_t|_{C^k} with constants that do
  // not blow up as t -> 0.
  Rng rng(7);
  MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
  double delta = default_delta(*f);
  PullbackSection u = random_section(f, delta, 0.9, rng);
  for (int k : {0, 1, 2}) {
    std::vector<double> forward, inverse;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
      PullbackSection st = u * t;
      SampledMap gt = chart_inverse(st);
      double dist = ck_distance(*f, gt, k);
      forward.push_back(section_norm(chart_forward(f, gt, delta), k).total / dist);
      inverse.push_back(dist / section_norm(st, k).total);
    }
    for (const auto* ratios : {&forward, &inverse}) {
      double lo = *std::min_element(ratios->begin(), ratios->end());
      double hi = *std::max_element(ratios->begin(), ratios->end());
      EXPECT_TRUE(std::isfinite(hi));
      EXPECT_LT(hi / lo, 1.5) << "k=" << k;
    }
  }
}

TEST(Transition, SameMapIsTheIdentity) {
  Rng rng(8);
  MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
  PullbackSection s = random_section(f, 0.2, 0.9, rng);
  EXPECT_LT(max_vector_difference(transition(f, s), s), 1e-14);
}

TEST(Transition, TorusIsTheShortestTranslation) {
  Rng rng(9);
  TargetManifold m = torus();
  MapPtr f = share(random_torus_map(m, kRes, rng));
  MapPtr g = neighbour(f, rng);
  PullbackSection s = random_section(f, 0.2, 0.9, rng);
  PullbackSection out = transition(g, s);
  for (int c = 0; c < 2; ++c)
    for (int node = 0; node < f->grid(c).node_count(); ++node) {
      Vector d = f->value(c, node).coords + s.chart_vectors(c).col(node) -
                 g->value(c, node).coords;
      // Brute-force shortest lattice representative.
      Vector best = d;
      for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) {
          Vector cand = d + vec({i * 2 * kPi, j * 2 * kPi});
          if (cand.norm() < best.norm()) best = cand;
        }
      EXPECT_LT((out.chart_vectors(c).col(node) - best).norm(), 1e-14);
    }
}

TEST(Transition, EqualsForwardAfterInverse) {
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    MapPtr f = share(great_circle(sphere(), kRes, random_rotation(rng)));
    MapPtr g = neighbour(f, rng);
    PullbackSection s = random_section(f, 0.2, 0.9, rng);
    PullbackSection direct = chart_forward(g, chart_inverse(s), 0.3);
    EXPECT_LT(max_vector_difference(transition(g, s), direct), 1e-12);
  }
}

TEST(Transition, BoundPlusDistanceMustStayInsideInjectivity) {
  TargetManifold m = sphere();
  MapPtr f = share(great_circle(m, kRes));
  MapPtr g = share(great_circle(m, kRes, Eigen::AngleAxisd(2.0, Eigen::Vector3d::UnitX())
                                             .toRotationMatrix()));
  PullbackSection s = PullbackSection::zero(f, 1.5);
  EXPECT_THROW(transition(g, s), WellDefinednessViolated);
}

TEST(Transition, Cocycle) {
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
    MapPtr g = neighbour(f, rng), h = neighbour(f, rng);
    PullbackSection s = random_section(f, 0.2, 0.9, rng);
    EXPECT_LT(max_vector_difference(transition(h, transition(g, s)), transition(h, s)), 1e-9);
  }
}

TEST(TransitionDerivative, MatchesCentralDifferences) {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
    MapPtr g = neighbour(f, rng);
    PullbackSection s0 = random_section(f, 0.2, 0.8, rng);
    PullbackSection s = random_section(f, 0.2, 0.8, rng);
    PullbackSection fd = transition_difference(g, s0, s, 1e-4);
    double err = max_vector_difference(transition_derivative(g, s0, s), fd);
    EXPECT_LT(err / max_vector_norm(fd), 1e-5);
  }
}

TEST(TransitionDerivative, TorusIsTheIdentity) {
  Rng rng(13);
  TargetManifold m = torus();
  MapPtr f = share(random_torus_map(m, kRes, rng));
  MapPtr g = neighbour(f, rng);
  PullbackSection s0 = random_section(f, 0.2, 0.8, rng);
  PullbackSection s = random_section(f, 0.2, 0.8, rng);
  EXPECT_LT(max_vector_difference(transition_derivative(g, s0, s), s), 1e-12);
}

TEST(TransitionDerivative, OfTheIdentityAtZero) {
  Rng rng(14);
  MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
  PullbackSection s = random_section(f, 0.2, 0.8, rng);
  PullbackSection d = transition_derivative(f, PullbackSection::zero(f, 0.2), s);
  EXPECT_LT(max_vector_difference(d, s), 1e-12);
  EXPECT_EQ(d.bound(), s.bound());
}

TEST(TransitionDerivative, ChainRuleAcrossThreeCharts) {
  Rng rng(15);
  for (int t = 0; t < 5; ++t) {
    MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
    MapPtr g = neighbour(f, rng), h = neighbour(f, rng);
    PullbackSection s0 = random_section(f, 0.2, 0.8, rng);
    PullbackSection s = random_section(f, 0.2, 0.8, rng);
    PullbackSection s0g = transition(g, s0);
    PullbackSection chained = transition_derivative(h, s0g, transition_derivative(g, s0, s));
    PullbackSection direct = transition_derivative(h, s0, s);
    EXPECT_LT(max_vector_difference(chained, direct) / max_vector_norm(direct), 1e-5);
  }
}

TEST(TransitionDerivative, RequiresACommonBase) {
  Rng rng(16);
  MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
  MapPtr g = neighbour(f, rng);
  EXPECT_THROW(transition_derivative(f, random_section(f, 0.2, 0.5, rng),
                                     random_section(g, 0.2, 0.5, rng)),
               BaseMismatch);
}

TEST(MetricIndependence, RoundToConformalTransitionIsDifferentiable) {
  Rng rng(17);
  TargetManifold round = sphere();
  TargetManifold conformal = round.with_conformal_factor("1 + 0.3*z*z");
  MapPtr f = share(random_sphere_map(round, 16, rng));
  MapPtr fc = share(with_target(*f, conformal));
  for (int t = 0; t < 3; ++t) {
    PullbackSection s0 = random_section(f, 0.2, 0.8, rng);
    PullbackSection s = random_section(f, 0.2, 0.8, rng);
    PullbackSection fd = transition_difference(fc, s0, s, 1e-4);
    double err = max_vector_difference(transition_derivative(fc, s0, s), fd);
    EXPECT_LT(err / max_vector_norm(fd), 1e-4);
  }
}

TEST(Pushforward, IdentityAndTranslation) {
  Rng rng(18);
  TargetManifold m = torus();
  SampledMap f = random_torus_map(m, kRes, rng);
  EXPECT_TRUE(pushforward(TargetMap::identity(m), f) == f);
  SampledMap shifted = pushforward(TargetMap::torus_translation(m, vec({0.3, -1.1})), f);
  for (int c = 0; c < 2; ++c)
    for (int node = 0; node < f.grid(c).node_count(); ++node)
      EXPECT_LT(m.wrap(shifted.value(c, node).coords - f.value(c, node).coords -
                       vec({0.3, -1.1}))
                    .norm(),
                1e-14);
}

TEST(Pushforward, RotationOfAGreatCircle) {
  TargetManifold m = sphere();
  Eigen::Vector3d axis = Eigen::Vector3d(1, 2, 3).normalized();
  SampledMap pushed = pushforward(TargetMap::sphere_rotation(m, axis, 0.3), great_circle(m, kRes));
  Eigen::Matrix3d rot = Eigen::AngleAxisd(0.3, axis).toRotationMatrix();
  EXPECT_LT(max_node_distance(pushed, great_circle(m, kRes, rot)), 1e-12);
}

TEST(Pushforward, IsContinuousAlongAShrinkingFamily) {
  Rng rng(19);
  TargetManifold m = sphere();
  MapPtr f = share(random_sphere_map(m, kRes, rng));
  PullbackSection u = random_section(f, default_delta(*f), 0.9, rng);
  TargetMap rot = TargetMap::sphere_rotation(m, Eigen::Vector3d::UnitY(), 1.0);
  SampledMap pf = pushforward(rot, *f);
  double previous = 1e300;
  for (double t : {1.0, 0.1, 0.01, 0.001}) {
    SampledMap pg = pushforward(rot, chart_inverse(u * t));
    double d = ck_distance(pf, pg, 2);
    EXPECT_LT(d, previous);
    previous = d;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(Pullback, IdentityShiftAndDoubleCover) {
  Rng rng(20);
  TargetManifold m = torus();
  SampledMap f = random_sphere_map(sphere(), kRes, rng);
  EXPECT_LT(max_node_distance(pullback(DomainMap::identity(f.atlas()), f), f), 1e-9);

  Vector zero = Vector::Zero(2);
  SampledMap loop = torus_loop(m, kRes, zero, vec({1, 0}), zero);
  // theta -> theta + c by a whole number of grid steps is exact.
  double c = 2 * kPi * 5 / kRes;
  SampledMap shifted = pullback(DomainMap::circle_shift(c), loop);
  EXPECT_LT(max_node_distance(shifted, torus_loop(m, kRes, vec({c, 0}), vec({1, 0}), zero)),
            1e-12);

  SampledMap doubled = pullback(DomainMap::circle_cover(2), loop);
  EXPECT_LT(max_node_distance(doubled, torus_loop(m, kRes, zero, vec({2, 0}), zero)), 1e-12);
  EXPECT_EQ(winding_numbers(doubled), (std::vector<long>{2, 0}));
}

TEST(Pullback, IsLinearInChartRepresentatives) {
  Rng rng(21);
  TargetManifold m = torus();
  SampledMap f1 = random_torus_map(m, kRes, rng), f2 = random_torus_map(m, kRes, rng);
  SampledMap sum = build_map(f1.atlas(), m, kRes, [&](int c, int node) {
    return m.reduce(f1.value(c, node).coords + f2.value(c, node).coords);
  });
  DomainMap shift = DomainMap::circle_shift(0.37);
  SampledMap p1 = pullback(shift, f1), p2 = pullback(shift, f2), ps = pullback(shift, sum);
  for (int c = 0; c < 2; ++c)
    for (int node = 0; node < ps.grid(c).node_count(); ++node)
      EXPECT_LT(m.wrap(ps.value(c, node).coords - p1.value(c, node).coords -
                       p2.value(c, node).coords)
                    .norm(),
                1e-10);
}

TEST(Section, ArithmeticAndBounds) {
  Rng rng(22);
  MapPtr f = share(random_sphere_map(sphere(), kRes, rng));
  PullbackSection s = random_section(f, 0.2, 0.5, rng);
  EXPECT_NEAR(s.sup_norm(), 0.1, 1e-12);
  EXPECT_LT(max_vector_difference(s + s, s * 2.0), 1e-16);
  EXPECT_EQ((s - s).sup_norm(), 0.0);
  EXPECT_NO_THROW(s.check_within_bound());
  EXPECT_THROW(s.with_bound(0.09).check_within_bound(), WellDefinednessViolated);
  MapPtr g = share(random_sphere_map(sphere(), kRes, rng));
  EXPECT_THROW(s + random_section(g, 0.2, 0.5, rng), BaseMismatch);
  for (int c = 0; c < 2; ++c)
    for (int node = 0; node < f->grid(c).node_count(); ++node)
      EXPECT_NEAR(f->value(c, node).coords.dot(s.chart_vectors(c).col(node)), 0.0, 1e-12);
}
