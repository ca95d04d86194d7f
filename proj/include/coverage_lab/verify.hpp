#ifndef COVERAGE_LAB_VERIFY_HPP
#define COVERAGE_LAB_VERIFY_HPP

// Built-in theorem suite: ten property checks over the shipped fixtures and seeded random cases.

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "coverage_lab/field.hpp"

#ifndef COVERAGE_LAB_SPEC_DIR
#define COVERAGE_LAB_SPEC_DIR "specs"
#endif

namespace coverage_lab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> values;

  void add(const std::string& key, const std::string& value) { values.emplace_back(key, value); }
  void add(const std::string& key, double value) { values.emplace_back(key, format_number(value)); }
};

struct SuiteConfig {
  std::string data_dir = COVERAGE_LAB_SPEC_DIR;
  std::uint64_t seed = 0;
};

/// Reference coverage for a convex polytope at x (capped), used by criterion 4.
using ConvexOracle = std::function<double(const HPolytope&, const Point&, double cap)>;

namespace detail {

inline std::string spec_path(const SuiteConfig& cfg, const std::string& name) { return cfg.data_dir + "/" + name; }

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Bounded polytope around z: n + 1 simplex-spanning constraints plus random extra ones, every offset
/// in [0.5, rmax]. Contained in the ball of radius n * rmax about z.
inline HPolytope random_bounded_polytope(Rng& rng, std::size_t n, std::size_t m, const Point& z, double rmax) {
  std::vector<Vector> normals;
  // simplex normals: e_i - mean, rotated randomly
  Eigen::MatrixXd q = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] = 2.0 * uniform01(rng) - 1.0;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
  const Eigen::MatrixXd rot = qr.householderQ();
  Eigen::MatrixXd simplex = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i <= n; ++i) simplex(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  simplex.rowwise() -= simplex.colwise().mean();
  // project onto the n-dimensional sum-zero subspace
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(simplex, Eigen::ComputeThinV);
  const Eigen::MatrixXd basis = svd.matrixV().leftCols(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i <= n; ++i) {
    Vector v = rot * (basis.transpose() * simplex.row(static_cast<Eigen::Index>(i)).transpose());
    normals.push_back(v.normalized());
  }
  while (normals.size() < m) normals.push_back(uniform_direction(rng, n));
  std::vector<Halfspace> hs;
  for (const auto& a : normals) {
    const double r = 0.5 + (rmax - 0.5) * uniform01(rng);
    const Vector scaled = a * (0.5 + 1.5 * uniform01(rng));
    hs.emplace_back(scaled, scaled.dot(z) + r * scaled.norm(), uniform01(rng) < 0.5 ? Boundary::open : Boundary::closed);
  }
  return HPolytope(std::move(hs));
}

/// Brute force: bisection on r, each step maximizing the concave min(rho(c) - r, r - |x - c|) over a
/// zooming grid of centers in [z - w, z + w]^n. Uses only closed-form slacks.
inline double grid_convex_oracle(const HPolytope& p, const Point& x, const Point& z, double w) {
  const auto n = x.size();
  const int g = n <= 2 ? 21 : 13;
  auto h = [&](const Point& c, double r) { return std::min(p.inner_radius_at(c) - r, r - (x - c).norm()); };
  auto feasible = [&](double r) {
    Point center = z;
    double half = w;
    double best = -std::numeric_limits<double>::infinity();
    for (int zoom = 0; zoom < 60 && half > 1e-13 * w; ++zoom) {
      const double step = 2.0 * half / (g - 1);
      Point best_c = center;
      std::vector<int> idx(static_cast<std::size_t>(n), 0);
      long total = 1;
      for (Eigen::Index i = 0; i < n; ++i) total *= g;
      for (long t = 0; t < total; ++t) {
        Point c(n);
        long rem = t;
        for (Eigen::Index i = 0; i < n; ++i) {
          c[i] = center[i] - half + step * static_cast<double>(rem % g);
          rem /= g;
        }
        const double v = h(c, r);
        if (v > best) {
          best = v;
          best_c = c;
        }
      }
      if (best >= 0.0) return true;
      center = best_c;
      half = 3.0 * step;
    }
    return best >= -1e-12 * w;
  };
  double lo = 0.0, hi = 2.0 * w;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline bool valid_growth_sequence(const Classifier& c, const CoverageResult& r, const Point& x, double cap) {
  if (!r.exceeds_cap() || r.witnesses.empty()) return false;
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    const Anchor& a = r.witnesses[i];
    if (i > 0 && !(a.ball.radius > r.witnesses[i - 1].ball.radius)) return false;
    if (!same_point(a.anchored_point, x) || !a.ball.contains(x)) return false;
    if (!certify_anchor(c, a).accepted()) return false;
  }
  return r.witnesses.back().ball.radius >= cap;
}

/// Two random lines through the middle of [-10, 10]^2, cells labeled by sign pattern. With
/// `refined` the lines themselves form the refinement set and the cells are open.
inline Classifier random_arrangement(Rng& rng, std::size_t lines, bool refined) {
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < lines; ++i) {
    const Vector a = uniform_direction(rng, 2);
    const Point through = make_point({-5.0 + 10.0 * uniform01(rng), -5.0 + 10.0 * uniform01(rng)});
    hs.emplace_back(a, a.dot(through), Boundary::open);
  }
  std::vector<NamedRegion> labels;
  for (std::size_t mask = 0; mask < (std::size_t{1} << lines); ++mask) {
    std::vector<Halfspace> cell;
    for (std::size_t i = 0; i < lines; ++i) {
      const Halfspace& h = hs[i];
      if (mask & (std::size_t{1} << i))
        cell.emplace_back(-h.normal(), -h.offset(), refined ? Boundary::open : Boundary::closed);
      else
        cell.push_back(h);
    }
    labels.push_back({"L" + std::to_string(mask), HPolytope(std::move(cell))});
  }
  std::optional<LabelRegion> refinement;
  if (refined) {
    UnionOfPolytopes u;
    for (const auto& h : hs)
      u.pieces.push_back(HPolytope({h.with_boundary(Boundary::closed), Halfspace(-h.normal(), -h.offset(), Boundary::closed)}));
    refinement = std::move(u);
  }
  return Classifier(2, std::move(labels), std::move(refinement), Box::cube(2, 10.0));
}

/// Two random crossing lines split [-10, 10]^2 into three convex labels: both negative sides, the
/// first line's positive side below the second, and everything above the second.
inline Classifier random_three_labels(Rng& rng) {
  std::vector<Halfspace> hs;
  for (int i = 0; i < 2; ++i) {
    const Vector a = uniform_direction(rng, 2);
    const Point through = make_point({-5.0 + 10.0 * uniform01(rng), -5.0 + 10.0 * uniform01(rng)});
    hs.emplace_back(a, a.dot(through), Boundary::open);
  }
  std::vector<NamedRegion> labels;
  labels.push_back({"A", HPolytope({hs[0], hs[1]})});
  labels.push_back({"B", HPolytope({Halfspace(-hs[0].normal(), -hs[0].offset(), Boundary::closed), hs[1]})});
  labels.push_back({"C", Halfspace(-hs[1].normal(), -hs[1].offset(), Boundary::closed)});
  return Classifier(2, std::move(labels), std::nullopt, Box::cube(2, 10.0));
}

}  // namespace detail

inline CriterionResult criterion_fig3_disparity(const SuiteConfig& cfg) {
  CriterionResult out{1, "fig3_coverage_disparity", false, {}};
  const auto t0 = std::chrono::steady_clock::now();
  const Classifier c = load_spec(detail::spec_path(cfg, "fig3.json"));
  CoverageOptions o;
  o.seed = cfg.seed;
  const CoverageResult rx = coverage_at(c, make_point({5.0, 0.0}), o);
  const CoverageResult ry = coverage_at(c, make_point({-15.0, 10.0}), o);
  out.add("coverage_x", rx.is_bounded() ? format_number(rx.radius) : to_string(rx.kind));
  out.add("coverage_y", ry.is_bounded() ? format_number(ry.radius) : to_string(ry.kind));
  const bool within = rx.is_bounded() && ry.is_bounded() && std::abs(rx.radius - 1.0) <= 1e-3 && std::abs(ry.radius - 6.5) <= 1e-3;
  const bool strict = compare(rx, ry) < 0;
  out.add("strict_inequality", strict ? "true" : "false");
  out.pass = within && strict && detail::seconds_since(t0) < 10.0;
  return out;
}

inline CriterionResult criterion_infinite_coverage(const SuiteConfig& cfg) {
  CriterionResult out{2, "refined_linear_exceeds_cap", false, {}};
  const auto t0 = std::chrono::steady_clock::now();
  const Classifier c = load_spec(detail::spec_path(cfg, "refined_linear.json"));
  const Box box = c.domain_box();
  Rng rng(mix_seed(cfg.seed, 2));
  std::size_t ok = 0, total = 0;
  for (int i = 0; i < 100; ++i) {
    const Point x = uniform_in_box(rng, box.lo, box.hi);
    if (label_of(c, x).refinement) continue;
    for (double k : {10.0, 1e3, 1e6}) {
      CoverageOptions o;
      o.cap = k * c.diameter();
      o.seed = cfg.seed;
      ++total;
      if (detail::valid_growth_sequence(c, coverage_at(c, x, o), x, o.cap)) ++ok;
    }
  }
  out.add("queries", static_cast<double>(total));
  out.add("exceeds_cap_with_valid_witnesses", static_cast<double>(ok));
  out.pass = total == 300 && ok == total && detail::seconds_since(t0) < 30.0;
  return out;
}

inline CriterionResult criterion_zero_boundary(const SuiteConfig& cfg) {
  CriterionResult out{3, "linear_zero_on_boundary", false, {}};
  const auto t0 = std::chrono::steady_clock::now();
  const Classifier c = load_spec(detail::spec_path(cfg, "linear.json"));
  const Halfspace closed_label = std::get<Halfspace>(c.region("N"));
  Rng rng(mix_seed(cfg.seed, 3));
  std::size_t zeros = 0, on = 0, exceeds = 0, off = 0;
  while (on < 20) {
    // dyadic x1 keeps the point exactly on the line x2 = x1 / 2 - 1
    const double x1 = std::floor((-16.0 + 32.0 * uniform01(rng)) * 8.0) / 8.0;
    const Point x = make_point({x1, 0.5 * x1 - 1.0});
    if (closed_label.normal().dot(x) != closed_label.offset()) continue;
    ++on;
    CoverageOptions o;
    o.seed = cfg.seed;
    if (coverage_at(c, x, o).is_zero()) ++zeros;
  }
  const Box box = c.domain_box();
  while (off < 20) {
    const Point x = uniform_in_box(rng, box.lo, box.hi);
    if (std::abs(closed_label.slack(x)) < 1e-9) continue;
    ++off;
    CoverageOptions o;
    o.seed = cfg.seed;
    if (detail::valid_growth_sequence(c, coverage_at(c, x, o), x, 1e6 * c.diameter())) ++exceeds;
  }
  out.add("boundary_zero", static_cast<double>(zeros));
  out.add("off_boundary_exceeds_cap", static_cast<double>(exceeds));
  out.pass = zeros == 20 && exceeds == 20 && detail::seconds_since(t0) < 10.0;
  return out;
}

inline CriterionResult criterion_oracle_equivalence(const SuiteConfig& cfg, const ConvexOracle& oracle = {}) {
  CriterionResult out{4, "convex_oracle_equivalence", false, {}};
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(mix_seed(cfg.seed, 4));
  std::size_t matches = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = i % 2 == 0 ? 2 : 3;
    const std::size_t m = 4 + static_cast<std::size_t>(uniform01(rng) * 7.0);
    const Point z = Point::Zero(static_cast<Eigen::Index>(n));
    const double rmax = 3.0;
    const HPolytope p = detail::random_bounded_polytope(rng, n, std::max(m, n + 1), z, rmax);
    const double w = static_cast<double>(n) * rmax + 1.0;
    Point x;
    do {
      x = uniform_in_box(rng, Vector::Constant(static_cast<Eigen::Index>(n), -w), Vector::Constant(static_cast<Eigen::Index>(n), w));
    } while (!p.contains(x) || !(p.inner_radius_at(x) > 0.0));
    const double cap = 1e6, tol = 1e-6;
    const CoverageResult r = coverage_exact_convex(x, p, cap, tol);
    const double ref = oracle ? oracle(p, x, cap) : detail::grid_convex_oracle(p, x, z, w);
    const double got = r.is_bounded() ? r.radius : (r.exceeds_cap() ? cap : 0.0);
    const double err = std::abs(got - ref);
    const double allowed = std::max(0.02 * ref, 2.0 * tol);
    worst = std::max(worst, err / std::max(ref, 1e-300));
    if (err <= allowed) ++matches;
  }
  out.add("cases", 50.0);
  out.add("matches", static_cast<double>(matches));
  std::ostringstream rel;
  rel.precision(3);
  rel << std::scientific << worst;
  out.add("worst_relative_error", rel.str());
  out.pass = matches == 50 && detail::seconds_since(t0) < 300.0;
  return out;
}

inline CriterionResult criterion_downward_closure(const SuiteConfig& cfg) {
  CriterionResult out{5, "downward_closure", false, {}};
  Rng rng(mix_seed(cfg.seed, 5));
  std::size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 3);
    const Point z = Point::Zero(static_cast<Eigen::Index>(n));
    const HPolytope p = detail::random_bounded_polytope(rng, n, n + 1 + static_cast<std::size_t>(uniform01(rng) * 6.0), z, 4.0);
    // a feasible (x, r2): center at z, radius below its depth, x inside the ball
    const double r2 = p.inner_radius_at(z) * (0.05 + 0.9 * uniform01(rng));
    const Ball b2(z, r2);
    const Point x = uniform_in_ball(rng, b2);
    const double r1 = r2 * (0.01 + 0.98 * uniform01(rng));
    const Anchor a2{b2, x, "P", AnchorCertificate::exact()};
    const Anchor a1 = shrink_anchor(a2, r1);
    const bool nested = (a1.ball.center - b2.center).norm() + r1 <= r2 * (1.0 + 1e-12);
    const bool inside = p.inner_radius_at(a1.ball.center) >= r1 * (1.0 - 1e-12);
    if (!(a1.ball.contains(x) && nested && inside && a1.ball.radius == r1)) ++failures;
  }
  out.add("cases", 1000.0);
  out.add("failures", static_cast<double>(failures));
  out.pass = failures == 0;
  return out;
}

inline CriterionResult criterion_direction_recovery(const SuiteConfig& cfg) {
  CriterionResult out{6, "asymptotic_direction_recovery", false, {}};
  Rng rng(mix_seed(cfg.seed, 6));
  std::size_t ok = 0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 4);
    const Vector a = uniform_direction(rng, n) * (0.5 + 2.0 * uniform01(rng));
    const double b = -5.0 + 10.0 * uniform01(rng);
    const Halfspace h(a, b, uniform01(rng) < 0.5 ? Boundary::open : Boundary::closed);
    Point x;
    do {
      x = uniform_in_box(rng, Vector::Constant(static_cast<Eigen::Index>(n), -10.0), Vector::Constant(static_cast<Eigen::Index>(n), 10.0));
    } while (!(h.slack(x) > 1e-3));
    const auto anchors = orthogonal_ray_anchors(h, x, 24);
    const DirectionEstimate d = estimate_asymptotic_direction(anchors, x);
    const Vector truth = -a.normalized();
    const double err = direction_angle(d.direction, truth);
    worst = std::max(worst, err);
    bool decreasing = true;
    const std::size_t k = d.residual_angles.size();
    for (std::size_t j = k - 10; j + 1 < k; ++j) decreasing = decreasing && d.residual_angles[j + 1] < d.residual_angles[j];
    bool valid = true;
    for (const auto& an : anchors) valid = valid && an.ball.contains(x) && h.slack(an.ball.center) >= an.ball.radius;
    if (err <= 1e-2 && decreasing && valid) ++ok;
  }
  std::ostringstream ws;
  ws.precision(3);
  ws << std::scientific << worst;
  out.add("halfspaces", 20.0);
  out.add("recovered", static_cast<double>(ok));
  out.add("worst_angle_rad", ws.str());
  out.pass = ok == 20;
  return out;
}

inline CriterionResult criterion_structure_verdicts(const SuiteConfig& cfg) {
  CriterionResult out{7, "structure_verdicts", false, {}};
  const auto t0 = std::chrono::steady_clock::now();
  StructureOptions so;
  so.seed = cfg.seed;
  bool pass = true;
  auto refined_check = [&](const std::string& key, const Classifier& c, const Vector& normal) {
    const StructureVerdict v = classify_structure(c, so);
    double angle = 1.0;
    if (v.hyperplane) angle = line_angle(v.hyperplane->normal(), normal);
    const bool ok = v.kind == StructureVerdict::Kind::refined_linear && angle <= 1e-3;
    out.add(key, std::string(to_string(v.kind)) + (v.hyperplane ? " angle=" + format_number(angle) : ""));
    pass = pass && ok;
  };
  refined_check("refined_linear", load_spec(detail::spec_path(cfg, "refined_linear.json")), make_point({0.0, 1.0}));
  refined_check("refine_linear", refine_boundary(load_spec(detail::spec_path(cfg, "linear.json"))), make_point({-0.5, 1.0}));

  auto not_refined = [&](const std::string& key, const Classifier& c) {
    const StructureVerdict v = classify_structure(c, so);
    const bool ok = v.kind == StructureVerdict::Kind::not_refined_linear && v.witness &&
                    (v.reason == "third_label" || (v.coverage && !v.coverage->exceeds_cap()));
    out.add(key, std::string(to_string(v.kind)) + " " + v.reason);
    pass = pass && ok;
  };
  not_refined("fig1", load_spec(detail::spec_path(cfg, "fig1.json")));
  not_refined("fig3", load_spec(detail::spec_path(cfg, "fig3.json")));
  Rng rng(mix_seed(cfg.seed, 7));
  not_refined("random_three_label", detail::random_three_labels(rng));

  const StructureVerdict t = classify_structure(load_spec(detail::spec_path(cfg, "trivial.json")), so);
  out.add("trivial", to_string(t.kind));
  pass = pass && t.kind == StructureVerdict::Kind::trivial;
  out.pass = pass && detail::seconds_since(t0) < 120.0;
  return out;
}

inline CriterionResult criterion_at_most_two_labels(const SuiteConfig& cfg) {
  CriterionResult out{8, "multi_label_never_refined_linear", false, {}};
  Rng rng(mix_seed(cfg.seed, 8));
  StructureOptions so;
  so.seed = cfg.seed;
  std::size_t refined_linear = 0;
  for (int i = 0; i < 50; ++i) {
    const Classifier c = detail::random_arrangement(rng, 2 + static_cast<std::size_t>(i % 2), i % 4 < 2);
    if (classify_structure(c, so).kind == StructureVerdict::Kind::refined_linear) ++refined_linear;
  }
  out.add("classifiers", 50.0);
  out.add("refined_linear_verdicts", static_cast<double>(refined_linear));
  out.pass = refined_linear == 0;
  return out;
}

inline CriterionResult criterion_generalized_linear(const SuiteConfig& cfg) {
  CriterionResult out{9, "generalized_binary_linear", false, {}};
  const auto lin = is_generalized_binary_linear(load_spec(detail::spec_path(cfg, "linear.json")), 2000, cfg.seed);
  const auto gen = is_generalized_binary_linear(load_spec(detail::spec_path(cfg, "generalized_linear.json")), 2000, cfg.seed);
  const auto fig3 = is_generalized_binary_linear(load_spec(detail::spec_path(cfg, "fig3.json")), 2000, cfg.seed);
  out.add("linear", lin.generalized ? "true" : "false");
  out.add("split_hyperplane", gen.generalized ? "true" : "false");
  out.add("fig3", fig3.generalized ? "true" : "false");
  out.pass = lin.generalized && gen.generalized && !fig3.generalized;
  return out;
}

inline std::vector<CriterionResult> run_property_criteria(const SuiteConfig& cfg, const ConvexOracle& oracle = {}) {
  std::vector<CriterionResult> out;
  out.push_back(criterion_fig3_disparity(cfg));
  out.push_back(criterion_infinite_coverage(cfg));
  out.push_back(criterion_zero_boundary(cfg));
  out.push_back(criterion_oracle_equivalence(cfg, oracle));
  out.push_back(criterion_downward_closure(cfg));
  out.push_back(criterion_direction_recovery(cfg));
  out.push_back(criterion_structure_verdicts(cfg));
  out.push_back(criterion_at_most_two_labels(cfg));
  out.push_back(criterion_generalized_linear(cfg));
  return out;
}

inline std::string format_criteria(const std::vector<CriterionResult>& results) {
  std::string s;
  for (const auto& r : results) {
    const std::string key = "c" + std::to_string(r.id);
    s += key + ".name: " + r.name + "\n";
    s += key + ".status: " + (r.pass ? "PASS" : "FAIL") + "\n";
    for (const auto& [k, v] : r.values) s += key + "." + k + ": " + v + "\n";
  }
  return s;
}

/// Criteria 1-9, then criterion 10: a second run must produce the same text.
inline std::vector<CriterionResult> run_theorem_suite(const SuiteConfig& cfg, const ConvexOracle& oracle = {}) {
  auto first = run_property_criteria(cfg, oracle);
  const auto second = run_property_criteria(cfg, oracle);
  CriterionResult det{10, "deterministic_report", false, {}};
  det.pass = format_criteria(first) == format_criteria(second);
  det.add("identical_reruns", det.pass ? "true" : "false");
  first.push_back(std::move(det));
  return first;
}

inline std::string format_report(const std::vector<CriterionResult>& results, const SuiteConfig& cfg) {
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass;
  std::string s = "suite: theorems\nseed: " + std::to_string(cfg.seed) + "\n";
  s += format_criteria(results);
  s += "passed: " + std::to_string(passed) + "/" + std::to_string(results.size()) + "\n";
  s += std::string("overall: ") + (passed == results.size() ? "PASS" : "FAIL") + "\n";
  return s;
}

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_VERIFY_HPP
