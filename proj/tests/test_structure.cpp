#include <gtest/gtest.h>

#include <cmath>

#include "test_helpers.hpp"

using namespace coverage_lab;
using testutil::spec;

namespace {

double normal_angle(const Hyperplane& h, const Vector& v) { return line_angle(h.normal(), v); }

/// Random points at least `margin` away from every line a.x = b in `lines`.
std::vector<Point> points_off_lines(Rng& rng, const std::vector<std::pair<Vector, double>>& lines, double margin, int count) {
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    const Point x = uniform_in_box(rng, Vector::Constant(2, -19.0), Vector::Constant(2, 19.0));
    bool ok = true;
    for (const auto& [a, b] : lines) ok &= std::abs(a.dot(x) - b) / a.norm() > margin;
    if (ok) out.push_back(x);
  }
  return out;
}

}  // namespace

TEST(Refine, LinearBoundaryBecomesRefinementSet) {
  const Classifier c = load_spec(spec("linear.json"));
  const Classifier r = refine_boundary(c);
  EXPECT_FALSE(r.is_ordinary());
  Rng rng(41);
  for (const auto& x : points_off_lines(rng, {{make_point({0.5, -1.0}), 1.0}}, 1e-6, 2000))
    EXPECT_EQ(label_of(r, x), label_of(c, x)) << format_point(x);
  for (double t : {-8.0, -1.0, 0.0, 2.0, 16.0}) {
    const Point on = make_point({t, 0.5 * t - 1.0});
    EXPECT_TRUE(label_of(r, on).refinement) << format_point(on);
  }
  EXPECT_TRUE(validate_partition(r, 5000, 2).unfalsified());
}

TEST(Refine, Fig3KeepsLabelsAwayFromEdges) {
  const Classifier c = load_spec(spec("fig3.json"));
  const Classifier r = refine_boundary(c);
  std::vector<std::pair<Vector, double>> edges;
  for (double v : {-20.0, -7.0, 18.0, 20.0}) edges.push_back({make_point({1.0, 0.0}), v});
  for (double v : {-20.0, -10.0, -1.0, 1.0, 20.0}) edges.push_back({make_point({0.0, 1.0}), v});
  Rng rng(42);
  for (const auto& x : points_off_lines(rng, edges, 1e-6, 2000)) EXPECT_EQ(label_of(r, x), label_of(c, x)) << format_point(x);
  for (const Point& edge : {make_point({0.0, 1.0}), make_point({-7.0, 5.0}), make_point({18.0, -5.0}), make_point({3.0, -10.0})})
    EXPECT_TRUE(label_of(r, edge).refinement) << format_point(edge);
  EXPECT_TRUE(validate_partition(r, 5000, 3).unfalsified());
}

TEST(Refine, AnalyticLabelsGetAnAnalyticRefinementSet) {
  const Classifier c = load_spec(spec("fig1.json"));
  const Classifier r = refine_boundary(c);
  ASSERT_TRUE(r.refinement_set().has_value());
  EXPECT_TRUE(std::holds_alternative<Predicate>(*r.refinement_set()));
  EXPECT_TRUE(label_of(r, make_point({-3.0, 0.0})).refinement);  // on both curves
  Rng rng(43);
  for (int i = 0; i < 2000; ++i) {
    const Point x = uniform_in_box(rng, Vector::Constant(2, -19.0), Vector::Constant(2, 19.0));
    if (std::abs(x[1] - 10.0 * std::sin(0.1 * x[0])) < 1e-6 || std::abs(x[0] + x[1] + 3.0) < 1e-6) continue;
    EXPECT_EQ(label_of(r, x), label_of(c, x)) << format_point(x);
  }
}

TEST(Negligible, Cases) {
  const HPolytope line({Halfspace(make_point({1.0, 1.0}), 2.0, Boundary::closed), Halfspace(make_point({-2.0, -2.0}), -4.0, Boundary::closed)});
  EXPECT_TRUE(is_negligible_region(line));
  const HPolytope empty({Halfspace(make_point({1.0, 0.0}), 0.0, Boundary::open), Halfspace(make_point({-1.0, 0.0}), 0.0, Boundary::closed)});
  EXPECT_TRUE(is_negligible_region(empty));
  const HPolytope slab({Halfspace(make_point({1.0, 0.0}), 1e-3, Boundary::closed), Halfspace(make_point({-1.0, 0.0}), 0.0, Boundary::closed)});
  EXPECT_FALSE(is_negligible_region(slab));
  EXPECT_FALSE(is_negligible_region(Halfspace(make_point({1.0, 0.0}), 0.0, Boundary::open)));
  EXPECT_TRUE(is_negligible_region(UnionOfPolytopes{{line, empty}}));
  EXPECT_FALSE(is_negligible_region(UnionOfPolytopes{{line, slab}}));
  EXPECT_THROW(is_negligible_region(Predicate::parse("x1 == 0", 2)), UnsupportedRegion);
}

TEST(Direction, RejectsDegenerateSequences) {
  const Halfspace h(make_point({0.0, 1.0}), 0.0, Boundary::open);
  const Point x = make_point({0.0, -1.0});
  auto anchors = orthogonal_ray_anchors(h, x, 5);
  EXPECT_THROW(estimate_asymptotic_direction({anchors[0], anchors[1]}, x), DegenerateSequence);
  EXPECT_THROW(estimate_asymptotic_direction({anchors[1], anchors[0], anchors[2]}, x), DegenerateSequence);
  EXPECT_THROW(estimate_asymptotic_direction(anchors, make_point({0.0, 1e6})), DegenerateSequence);
  auto centered = anchors;
  centered[0] = Anchor{Ball(x, 0.5), x, "", AnchorCertificate::exact()};
  EXPECT_THROW(estimate_asymptotic_direction(centered, x), DegenerateSequence);
  EXPECT_THROW(orthogonal_ray_anchors(h, make_point({0.0, 0.0}), 3), PointNotInRegion);
}

TEST(Direction, RayAnchorsAreValidAndConvergeToTheInwardNormal) {
  Rng rng(44);
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 4);
    const Halfspace h(uniform_direction(rng, n) * (0.5 + uniform01(rng)), uniform01(rng) * 4.0 - 2.0, Boundary::closed);
    Point x = uniform_in_box(rng, Vector::Constant(static_cast<Eigen::Index>(n), -5.0), Vector::Constant(static_cast<Eigen::Index>(n), 5.0));
    if (!(h.slack(x) > 1e-3)) continue;
    const auto anchors = orthogonal_ray_anchors(h, x, 24);
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      EXPECT_TRUE(anchors[k].ball.contains(x));
      EXPECT_GE(h.slack(anchors[k].ball.center), anchors[k].ball.radius);
      if (k) EXPECT_GT(anchors[k].ball.radius, anchors[k - 1].ball.radius);
    }
    const DirectionEstimate e = estimate_asymptotic_direction(anchors, x);
    const Vector inward = -h.normal().normalized();
    EXPECT_LT(direction_angle(e.direction, inward), 1e-5);
    EXPECT_LT(e.residual_angles.front(), M_PI / 2.0);
    EXPECT_EQ(e.residual_angles.back(), 0.0);
  }
}

TEST(HalfspaceCertificate, ExactForConvexLabels) {
  const Classifier c = load_spec(spec("linear.json"));
  const Point x = make_point({0.0, 0.0});
  ASSERT_EQ(label_of(c, x).name, "M");
  EXPECT_EQ(halfspace_certificate(c, x, make_point({-0.5, 1.0}), 100, 1).kind, Certificate::Kind::proven);
  const Certificate bad = halfspace_certificate(c, x, make_point({1.0, 0.0}), 100, 1);
  ASSERT_EQ(bad.kind, Certificate::Kind::refuted);
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_GT(bad.witness->dot(make_point({1.0, 0.0})), 0.0);
  EXPECT_NE(label_of(c, *bad.witness).name, "M");
}

TEST(HalfspaceCertificate, SampledForAnalyticLabels) {
  const Classifier c = load_spec(spec("fig1.json"));
  const Certificate bad = halfspace_certificate(c, make_point({0.0, 5.0}), make_point({0.0, 1.0}), 2000, 2);
  ASSERT_EQ(bad.kind, Certificate::Kind::refuted);
  EXPECT_NE(label_of(c, *bad.witness).name, "E");
  const Classifier split(2, {{"U", Predicate::parse("x2 > 0", 2)}, {"D", Predicate::parse("x2 <= 0", 2)}});
  const Certificate ok = halfspace_certificate(split, make_point({3.0, 1.0}), make_point({0.0, 1.0}), 2000, 2);
  EXPECT_EQ(ok.kind, Certificate::Kind::unfalsified);
}

TEST(Verdicts, ShippedSpecs) {
  StructureOptions o;
  const StructureVerdict rl = classify_structure(load_spec(spec("refined_linear.json")), o);
  EXPECT_EQ(rl.kind, StructureVerdict::Kind::refined_linear) << rl.reason;
  ASSERT_TRUE(rl.hyperplane.has_value());
  EXPECT_LT(normal_angle(*rl.hyperplane, make_point({0.0, 1.0})), 1e-6);
  EXPECT_NEAR(rl.hyperplane->offset(), 0.0, 1e-6);
  EXPECT_EQ(rl.observed_labels.size(), 2u);

  const StructureVerdict lin = classify_structure(load_spec(spec("linear.json")), o);
  EXPECT_EQ(lin.kind, StructureVerdict::Kind::not_refined_linear);
  EXPECT_EQ(lin.reason, "zero_on_boundary");
  ASSERT_TRUE(lin.coverage.has_value());
  EXPECT_TRUE(lin.coverage->is_zero());

  const StructureVerdict refined = classify_structure(refine_boundary(load_spec(spec("linear.json"))), o);
  EXPECT_EQ(refined.kind, StructureVerdict::Kind::refined_linear) << refined.reason;
  ASSERT_TRUE(refined.hyperplane.has_value());
  EXPECT_LT(normal_angle(*refined.hyperplane, make_point({-0.5, 1.0})), 1e-6);

  const StructureVerdict f3 = classify_structure(load_spec(spec("fig3.json")), o);
  EXPECT_EQ(f3.kind, StructureVerdict::Kind::not_refined_linear);
  EXPECT_EQ(f3.reason, "bounded_coverage");
  ASSERT_TRUE(f3.coverage && f3.witness);
  EXPECT_TRUE(f3.coverage->is_bounded());

  EXPECT_EQ(classify_structure(load_spec(spec("trivial.json")), o).kind, StructureVerdict::Kind::trivial);

  const StructureVerdict g = classify_structure(load_spec(spec("generalized_linear.json")), o);
  EXPECT_EQ(g.kind, StructureVerdict::Kind::not_refined_linear);
  EXPECT_EQ(g.reason, "zero_on_boundary");
}

TEST(Verdicts, ThirdLabel) {
  const HPolytope a({Halfspace(make_point({1.0, 0.0}), 0.0, Boundary::open)});
  const HPolytope b({Halfspace(make_point({-1.0, 0.0}), 0.0, Boundary::closed), Halfspace(make_point({0.0, 1.0}), 0.0, Boundary::open)});
  const HPolytope d({Halfspace(make_point({-1.0, 0.0}), 0.0, Boundary::closed), Halfspace(make_point({0.0, -1.0}), 0.0, Boundary::closed)});
  const Classifier three(2, {{"A", a}, {"B", b}, {"D", d}});
  const StructureVerdict v = classify_structure(three, {});
  EXPECT_EQ(v.kind, StructureVerdict::Kind::not_refined_linear);
  EXPECT_EQ(v.observed_labels.size(), 3u);
}

TEST(Verdicts, DeterministicForFixedSeed) {
  const Classifier c = load_spec(spec("fig3.json"));
  StructureOptions o;
  o.seed = 5;
  const StructureVerdict a = classify_structure(c, o), b = classify_structure(c, o);
  EXPECT_EQ(verdict_to_json(a).dump(), verdict_to_json(b).dump());
}

TEST(GeneralizedLinear, Recognition) {
  const GeneralizedLinearVerdict lin = is_generalized_binary_linear(load_spec(spec("linear.json")), 64, 0);
  EXPECT_TRUE(lin.generalized) << lin.reason;
  ASSERT_TRUE(lin.hyperplane.has_value());
  EXPECT_LT(normal_angle(*lin.hyperplane, make_point({0.5, -1.0})), 1e-9);
  EXPECT_EQ(lin.halfspace_labels.size(), 2u);

  EXPECT_TRUE(is_generalized_binary_linear(load_spec(spec("generalized_linear.json")), 64, 0).generalized);
  EXPECT_FALSE(is_generalized_binary_linear(load_spec(spec("fig3.json")), 64, 0).generalized);
  EXPECT_FALSE(is_generalized_binary_linear(load_spec(spec("fig1.json")), 64, 0).generalized);
  EXPECT_FALSE(is_generalized_binary_linear(load_spec(spec("refined_linear.json")), 64, 0).generalized);
  EXPECT_FALSE(is_generalized_binary_linear(load_spec(spec("trivial.json")), 64, 0).generalized);

  // two halfspaces whose boundaries are parallel but offset leave a gap: not a partition into halves
  const Classifier shifted(2, {{"L", Halfspace(make_point({1.0, 0.0}), 0.0, Boundary::open)},
                               {"R", Halfspace(make_point({-1.0, 0.0}), 0.0, Boundary::closed)},
                               {"thin", HPolytope({Halfspace(make_point({1.0, 0.0}), 1.0, Boundary::closed),
                                                   Halfspace(make_point({-1.0, 0.0}), -1.0, Boundary::closed)})}});
  EXPECT_FALSE(is_generalized_binary_linear(shifted, 64, 0).generalized);
}
