#include <gtest/gtest.h>

#include "test_helpers.hpp"

using namespace coverage_lab;
using namespace testutil;

TEST(Halfspace, OpenAndClosedMembership) {
  const Halfspace open(make_point({1.0, 0.0}), 2.0, Boundary::open);
  const Halfspace closed = open.with_boundary(Boundary::closed);
  const Point on = make_point({2.0, 5.0});
  EXPECT_FALSE(open.contains(on));
  EXPECT_TRUE(closed.contains(on));
  EXPECT_TRUE(open.closure_contains(on));
  EXPECT_DOUBLE_EQ(open.slack(make_point({-1.0, 0.0})), 3.0);
}

TEST(Halfspace, RejectsZeroNormal) {
  EXPECT_THROW(Halfspace(make_point({0.0, 0.0}), 1.0, Boundary::open), Error);
}

TEST(Halfspace, DimensionChecks) {
  const Halfspace h(make_point({1.0, 0.0}), 2.0, Boundary::open);
  EXPECT_THROW(h.contains(make_point({1.0, 2.0, 3.0})), DimensionMismatch);
}

TEST(Ball, StrictContainment) {
  const Ball b(make_point({0.0, 0.0}), 1.0);
  EXPECT_TRUE(b.contains(make_point({0.5, 0.5})));
  EXPECT_FALSE(b.contains(make_point({1.0, 0.0})));
  EXPECT_THROW(Ball(make_point({0.0}), 0.0), Error);
}

TEST(Polytope, BoxInnerRadius) {
  const HPolytope box = box_polytope(make_point({0.0, 0.0}), make_point({1.0, 2.0}), Boundary::open);
  EXPECT_DOUBLE_EQ(box.inner_radius_at(make_point({0.5, 1.0})), 0.5);
  EXPECT_TRUE(box.contains(make_point({0.5, 1.0})));
  EXPECT_FALSE(box.contains(make_point({0.0, 1.0})));
  EXPECT_TRUE(box.closure_contains(make_point({0.0, 1.0})));
}

TEST(Polytope, BallContainmentIgnoresBoundaryKind) {
  const HPolytope open = box_polytope(make_point({0.0, 0.0}), make_point({1.0, 1.0}), Boundary::open);
  const HPolytope closed = box_polytope(make_point({0.0, 0.0}), make_point({1.0, 1.0}), Boundary::closed);
  const Ball tangent(make_point({0.5, 0.5}), 0.5);
  EXPECT_TRUE(ball_in_polytope(tangent, open));
  EXPECT_TRUE(ball_in_polytope(tangent, closed));
  EXPECT_FALSE(ball_in_polytope(Ball(make_point({0.5, 0.5}), 0.5000001), closed));
}

TEST(Polytope, InconsistentPairs) {
  const Halfspace a(make_point({1.0, 0.0}), 0.0, Boundary::closed);
  const Halfspace b(make_point({-1.0, 0.0}), -1.0, Boundary::closed);  // x >= 1 with x <= 0
  EXPECT_TRUE(has_inconsistent_pair(HPolytope({a, b})));
  const Halfspace c(make_point({-1.0, 0.0}), 0.0, Boundary::closed);  // x >= 0 with x <= 0
  EXPECT_FALSE(has_inconsistent_pair(HPolytope({a, c})));
  EXPECT_TRUE(has_inconsistent_pair(HPolytope({a.with_boundary(Boundary::open), c})));
  EXPECT_THROW(project_onto_polytope(make_point({3.0, 0.0}), HPolytope({a, b}), 1e-9), EmptyPolytope);
}

TEST(Projection, InsidePointIsFixed) {
  const HPolytope box = box_polytope(make_point({0.0, 0.0}), make_point({1.0, 1.0}));
  const auto [p, d] = project_onto_polytope(make_point({0.3, 0.4}), box, 1e-12);
  EXPECT_EQ(d, 0.0);
  EXPECT_TRUE(same_point(p, make_point({0.3, 0.4})));
}

TEST(Projection, MatchesActiveSetOracle) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 3);
    const HPolytope p = random_polytope(rng, n, n + 1 + static_cast<std::size_t>(uniform01(rng) * 6.0));
    const Point x = uniform_in_box(rng, Vector::Constant(static_cast<Eigen::Index>(n), -15.0), Vector::Constant(static_cast<Eigen::Index>(n), 15.0));
    const auto [proj, dist] = project_onto_polytope(x, p, 1e-10);
    const double ref = oracle::polytope_distance(rows_of(p), x);
    EXPECT_NEAR(dist, ref, 1e-6 * (1.0 + ref)) << "case " << i;
    EXPECT_LE(p.max_violation(proj), 1e-8);
  }
}

TEST(Projection, Idempotent) {
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const HPolytope p = random_polytope(rng, 3, 7);
    const Point x = uniform_in_box(rng, Vector::Constant(3, -20.0), Vector::Constant(3, 20.0));
    const auto [once, d1] = project_onto_polytope(x, p, 1e-11);
    const auto [twice, d2] = project_onto_polytope(once, p, 1e-11);
    EXPECT_LE((twice - once).norm(), 1e-7);
    EXPECT_LE(d2, 1e-7);
  }
}

TEST(Projection, DualBoundNeverExceedsDistance) {
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const HPolytope p = random_polytope(rng, 2, 6);
    const Point x = uniform_in_box(rng, Vector::Constant(2, -20.0), Vector::Constant(2, 20.0));
    const auto st = dykstra_project(x, p, 1e-12, 50);
    const double ref = oracle::polytope_distance(rows_of(p), x);
    EXPECT_LE(st.lower_bound, ref + 1e-9);
  }
}

TEST(Shrink, Monotone) {
  Rng rng(14);
  for (int i = 0; i < 50; ++i) {
    const HPolytope p = random_polytope(rng, 2, 6);
    const double r1 = uniform01(rng), r2 = r1 + uniform01(rng);
    const HPolytope s1 = shrink_polytope(p, r1), s2 = shrink_polytope(p, r2);
    for (int k = 0; k < 200; ++k) {
      const Point y = uniform_in_box(rng, Vector::Constant(2, -8.0), Vector::Constant(2, 8.0));
      if (s2.closure_contains(y)) {
        EXPECT_TRUE(s1.closure_contains(y));
        EXPECT_GE(p.inner_radius_at(y), r2 - 1e-12);
      }
    }
  }
}

TEST(Hyperplane, ProjectionAndAngles) {
  const Hyperplane h(make_point({0.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(h.signed_distance(make_point({3.0, 4.0})), 3.0);
  EXPECT_TRUE(same_point(h.project(make_point({3.0, 4.0})), make_point({3.0, 1.0})));
  EXPECT_NEAR(line_angle(make_point({0.0, 1.0}), make_point({0.0, -1.0})), 0.0, 1e-15);
  EXPECT_NEAR(direction_angle(make_point({0.0, 1.0}), make_point({0.0, -1.0})), M_PI, 1e-12);
}
