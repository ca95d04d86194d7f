#ifndef COVERAGE_LAB_STRUCTURE_HPP
#define COVERAGE_LAB_STRUCTURE_HPP

// Structural tests for classifiers: boundary refinement, asymptotic anchor directions, halfspace
// certificates, the refined-linear structure verdict and generalized binary linear recognition.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/SVD>

#include "coverage_lab/coverage.hpp"
#include "coverage_lab/parallel.hpp"

namespace coverage_lab {

namespace detail {

struct CanonicalHalfspace {
  std::vector<double> normal;
  double offset;
  bool closed;
  auto key() const { return std::tie(normal, offset, closed); }
  friend bool operator<(const CanonicalHalfspace& a, const CanonicalHalfspace& b) { return a.key() < b.key(); }
  friend bool operator==(const CanonicalHalfspace& a, const CanonicalHalfspace& b) { return a.key() == b.key(); }
};

/// Unit normals, sorted constraints: equal sets of halfspaces compare equal.
inline std::vector<CanonicalHalfspace> canonical(const HPolytope& p) {
  std::vector<CanonicalHalfspace> out;
  for (const auto& h : p.halfspaces()) {
    const Vector u = h.normal() / h.normal_norm();
    out.push_back({std::vector<double>(u.data(), u.data() + u.size()), h.offset() / h.normal_norm(), h.closed()});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline HPolytope open_polytope(const HPolytope& p) {
  std::vector<Halfspace> hs;
  for (const auto& h : p.halfspaces()) hs.push_back(h.with_boundary(Boundary::open));
  return HPolytope(std::move(hs));
}

/// Faces of p: constraint i turned into an equality, the rest closed. Empty faces are dropped.
inline std::vector<HPolytope> faces(const HPolytope& p) {
  std::vector<HPolytope> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<Halfspace> hs;
    for (std::size_t j = 0; j < p.size(); ++j) hs.push_back(p.halfspaces()[j].with_boundary(Boundary::closed));
    const Halfspace& h = p.halfspaces()[i];
    hs.emplace_back(-h.normal(), -h.offset(), Boundary::closed);
    HPolytope face(std::move(hs));
    if (!has_inconsistent_pair(face)) out.push_back(std::move(face));
  }
  return out;
}

inline expr::NodePtr or_node(expr::NodePtr a, expr::NodePtr b) {
  if (!a) return b;
  return expr::binary(expr::Kind::logical_or, std::move(a), std::move(b));
}

}  // namespace detail

/// Moves every label boundary into the refinement set: labels become interior-style (strict inequalities)
/// and the refinement set gains the boundary pieces (polytope faces or the zero sets of analytic
/// comparisons). label_of is unchanged away from the new refinement set.
inline Classifier refine_boundary(const Classifier& c) {
  std::vector<NamedRegion> labels;
  std::vector<HPolytope> new_pieces;
  expr::NodePtr analytic_boundary;
  std::vector<expr::NodePtr> zero_sets;
  bool analytic = false;

  for (const auto& l : c.labels()) {
    std::visit(overloaded{[&](const Halfspace& h) {
                            labels.push_back({l.name, h.with_boundary(Boundary::open)});
                            for (auto& f : detail::faces(HPolytope({h}))) new_pieces.push_back(std::move(f));
                          },
                          [&](const HPolytope& p) {
                            labels.push_back({l.name, detail::open_polytope(p)});
                            for (auto& f : detail::faces(p)) new_pieces.push_back(std::move(f));
                          },
                          [&](const UnionOfPolytopes& u) {
                            UnionOfPolytopes open;
                            for (const auto& p : u.pieces) {
                              open.pieces.push_back(detail::open_polytope(p));
                              for (auto& f : detail::faces(p)) new_pieces.push_back(std::move(f));
                            }
                            labels.push_back({l.name, std::move(open)});
                          },
                          [&](const Predicate& p) {
                            analytic = true;
                            labels.push_back({l.name, expr::interior_of(p)});
                            for (const auto& atom : expr::comparison_atoms(p)) {
                              auto eq = expr::binary(expr::Kind::eq, atom->lhs, atom->rhs);
                              bool seen = false;
                              for (const auto& e : zero_sets) seen = seen || expr::structurally_equal(e, eq);
                              if (seen) continue;
                              zero_sets.push_back(eq);
                              analytic_boundary = detail::or_node(analytic_boundary, eq);
                            }
                          }},
               l.region);
  }

  // Drop duplicate faces and faces already present in the refinement set.
  std::vector<std::vector<detail::CanonicalHalfspace>> seen;
  std::vector<HPolytope> existing;
  if (c.refinement_set() && !std::holds_alternative<Predicate>(*c.refinement_set()))
    existing = polytope_pieces(*c.refinement_set());
  for (const auto& p : existing) seen.push_back(detail::canonical(p));
  std::vector<HPolytope> added;
  for (auto& f : new_pieces) {
    auto key = detail::canonical(f);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(std::move(key));
    added.push_back(std::move(f));
  }

  std::optional<LabelRegion> refinement = c.refinement_set();
  const bool analytic_refinement = refinement && std::holds_alternative<Predicate>(*refinement);
  if (analytic || analytic_refinement) {
    expr::NodePtr node;
    if (refinement) node = to_predicate(*refinement).expr().root();
    for (const auto& p : added) node = detail::or_node(node, to_predicate(p).expr().root());
    if (analytic_boundary) node = detail::or_node(node, analytic_boundary);
    if (node) refinement = Predicate(expr::Expr(node, c.dimension()));
  } else if (!added.empty()) {
    std::vector<HPolytope> pieces = existing;
    for (auto& p : added) pieces.push_back(std::move(p));
    if (pieces.size() == 1)
      refinement = pieces.front();
    else
      refinement = UnionOfPolytopes{std::move(pieces)};
  }
  return Classifier(c.dimension(), std::move(labels), std::move(refinement), c.declared_domain_box(),
                    c.probe_points());
}

/// True iff every polyhedral piece has affine dimension < n, detected structurally: a pair of opposite
/// constraints with zero gap (an equality) or an inconsistent pair (empty piece).
inline bool is_negligible_region(const LabelRegion& r) {
  if (std::holds_alternative<Predicate>(r)) throw UnsupportedRegion("negligibility of analytic regions");
  auto negligible_piece = [](const HPolytope& p) {
    if (has_inconsistent_pair(p)) return true;
    const auto& hs = p.halfspaces();
    for (std::size_t i = 0; i < hs.size(); ++i)
      for (std::size_t j = i + 1; j < hs.size(); ++j) {
        const Vector ui = hs[i].normal() / hs[i].normal_norm();
        const Vector uj = hs[j].normal() / hs[j].normal_norm();
        if (ui.dot(uj) > -1.0 + 1e-12) continue;
        const double gap = hs[i].offset() / hs[i].normal_norm() + hs[j].offset() / hs[j].normal_norm();
        if (gap <= 1e-12 * (1.0 + std::abs(hs[i].offset() / hs[i].normal_norm()))) return true;
      }
    return false;
  };
  for (const auto& p : polytope_pieces(r))
    if (!negligible_piece(p)) return false;
  return true;
}

struct DirectionEstimate {
  Vector direction;                    // s*, unit length
  std::vector<double> residual_angles;  // angle(s_i, s*), radians
};

/// s_n = (q_n - x) / |q_n - x| for the anchor centers q_n; s* is the last s_n.
inline DirectionEstimate estimate_asymptotic_direction(const std::vector<Anchor>& anchors, const Point& x) {
  if (anchors.size() < 3) throw DegenerateSequence("need at least 3 anchors, got " + std::to_string(anchors.size()));
  std::vector<Vector> s;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const auto& a = anchors[i];
    require_same_dim(static_cast<std::size_t>(x.size()), a.ball.center);
    if (i > 0 && !(a.ball.radius > anchors[i - 1].ball.radius))
      throw DegenerateSequence("anchor radii must be strictly increasing");
    if (!a.ball.contains(x)) throw DegenerateSequence("anchor " + std::to_string(i) + " does not contain x");
    const Vector d = a.ball.center - x;
    const double len = d.norm();
    if (!(len > 0.0)) throw DegenerateSequence("anchor " + std::to_string(i) + " is centered at x");
    s.push_back(d / len);
  }
  DirectionEstimate out;
  out.direction = s.back();
  for (const auto& v : s) out.residual_angles.push_back(direction_angle(v, out.direction));
  return out;
}

/// Increasing anchors for x inside an open or closed halfspace: centers x + t_i u + d w on the inward
/// normal ray u shifted laterally by d = dist(x, boundary) along a fixed unit w orthogonal to u (no shift
/// in one dimension), t_i = d 2^(i+1), radius |q_i - x| + d/2. Each lies in the halfspace, and the
/// direction to the center approaches u at rate O(1/t_i).
inline std::vector<Anchor> orthogonal_ray_anchors(const Halfspace& h, const Point& x, std::size_t count,
                                                  const std::string& label = {}) {
  require_same_dim(h.dim(), x);
  const double d = h.slack(x);
  if (!(d > 0.0)) throw PointNotInRegion();
  const Vector u = -h.normal() / h.normal_norm();
  Vector w = Vector::Zero(x.size());
  if (x.size() > 1) {
    Eigen::Index k = 0;
    u.cwiseAbs().minCoeff(&k);
    w[k] = 1.0;
    w -= w.dot(u) * u;
    w.normalize();
  }
  std::vector<Anchor> out;
  double t = 2.0 * d;
  for (std::size_t i = 0; i < count; ++i, t *= 2.0) {
    const Point q = x + t * u + d * w;
    const double r = (q - x).norm() + d / 2.0;
    if (!(h.slack(q) >= r)) throw Error("orthogonal ray anchor left the halfspace");
    out.push_back(Anchor{Ball(q, r), x, label, AnchorCertificate::exact()});
  }
  return out;
}

namespace detail {

/// Witness p in H = {p : dir.(p - x) > 0} outside polytope P, or nothing.
inline std::optional<Point> halfspace_escape(const HPolytope& p, const Point& x, const Vector& dir, double scale) {
  for (const auto& h : p.halfspaces()) {
    const Vector a = h.normal() / h.normal_norm();
    const Vector perp = a - a.dot(dir) * dir;
    std::vector<Point> candidates;
    if (perp.norm() > 1e-9) candidates.push_back(x + 1e-6 * scale * dir + 1e3 * scale * (1.0 + std::abs(h.offset())) * perp / perp.norm());
    if (a.dot(dir) > 0.0) candidates.push_back(x + 1e3 * scale * (1.0 + std::abs(h.offset())) * dir);
    candidates.push_back(x + 1e-9 * scale * dir);
    for (auto& c : candidates)
      if (dir.dot(c - x) > 0.0 && !h.contains(c)) return c;
  }
  return std::nullopt;
}

/// Exact test of H = {p : dir.(p - x) > 0} inside P: every constraint must face against dir with x on
/// or inside it.
inline bool polytope_contains_halfspace(const HPolytope& p, const Point& x, const Vector& dir) {
  for (const auto& h : p.halfspaces()) {
    const Vector a = h.normal() / h.normal_norm();
    if (a.dot(dir) > -1.0 + 1e-12) return false;
    if (h.slack(x) < 0.0) return false;
  }
  return true;
}

}  // namespace detail

/// Tests whether the open halfspace {p : direction.(p - x) > 0} lies inside the label of x (or, when x
/// is a refinement point, the label just across x along `direction`).
inline Certificate halfspace_certificate(const Classifier& c, const Point& x, const Vector& direction,
                                         std::size_t budget, std::uint64_t seed) {
  require_same_dim(c.dimension(), x);
  require_same_dim(c.dimension(), direction);
  if (!(direction.norm() > 0.0)) throw Error("direction must be nonzero");
  const Vector dir = direction.normalized();
  const double diam = c.diameter();

  std::string label;
  try {
    auto l = label_of(c, x);
    if (!l.refinement) label = l.name;
    if (l.refinement) {
      auto across = label_of(c, x + 1e-9 * diam * dir);
      if (across.refinement) return Certificate::refuted(Point(x + 1e-9 * diam * dir));
      label = across.name;
    }
  } catch (const NoLabel&) {
    return Certificate::refuted(x);
  }
  const LabelRegion& region = c.region(label);

  if (is_convex(region)) {
    const HPolytope p = as_polytope(region);
    if (detail::polytope_contains_halfspace(p, x, dir)) return Certificate::proven();
    return Certificate::refuted(detail::halfspace_escape(p, x, dir, diam));
  }
  if (const auto* u = std::get_if<UnionOfPolytopes>(&region))
    for (const auto& piece : u->pieces)
      if (detail::polytope_contains_halfspace(piece, x, dir)) return Certificate::proven();

  const Box box = c.domain_box();
  Rng rng(seed);
  auto member = [&](const Point& p) {
    try {
      return region_contains(region, p);
    } catch (const EvalError&) {
      return false;
    }
  };
  for (std::size_t i = 0; i < budget; ++i) {
    Point p;
    if (i % 2 == 0) {
      p = uniform_in_box(rng, box.lo, box.hi);
      const double side = dir.dot(p - x);
      if (side <= 0.0) p -= 2.0 * side * dir;  // reflect into H
      if (!(dir.dot(p - x) > 0.0)) continue;
    } else {
      Vector v = uniform_direction(rng, c.dimension());
      if (v.dot(dir) < 0.0) v = -v;
      p = x + (10.0 * diam * uniform01(rng)) * v;
      if (!(dir.dot(p - x) > 0.0)) continue;
    }
    if (!member(p)) return Certificate::refuted(std::move(p));
  }
  return Certificate::unfalsified(budget, seed);
}

struct StructureVerdict {
  enum class Kind { refined_linear, not_refined_linear, trivial, inconclusive };
  Kind kind = Kind::inconclusive;
  double cap = 0.0;
  std::size_t probes = 0;
  std::vector<std::string> observed_labels;
  // RefinedLinear
  std::optional<Hyperplane> hyperplane;  // unit normal; first label on the side normal.p < offset
  double fit_residual = 0.0;
  // NotRefinedLinear
  std::optional<Point> witness;
  std::optional<CoverageResult> coverage;
  std::string reason;
};

inline const char* to_string(StructureVerdict::Kind k) {
  switch (k) {
    case StructureVerdict::Kind::refined_linear: return "RefinedLinear";
    case StructureVerdict::Kind::not_refined_linear: return "NotRefinedLinear";
    case StructureVerdict::Kind::trivial: return "TrivialClassifier";
    default: return "Inconclusive";
  }
}

struct StructureOptions {
  std::size_t probe_count = 64;
  double cap = 0.0;  // <= 0: 1e3 * domain diameter
  std::size_t budget = 2000;
  std::uint64_t seed = 0;
  double tol = 0.0;  // <= 0: 1e-6 * domain diameter
};

namespace detail {

/// Boundary point between a (label la) and b (label lb) by bisection on the segment.
inline Point locate_boundary(const Classifier& c, Point a, Point b, const std::string& la) {
  for (int it = 0; it < 200; ++it) {
    const Point mid = 0.5 * (a + b);
    if ((mid - a).norm() == 0.0 || (mid - b).norm() == 0.0) break;
    const auto l = label_of(c, mid);
    if (l.refinement) return mid;
    if (l.name == la) a = mid;
    else b = mid;
  }
  return 0.5 * (a + b);
}

/// A point exactly on a closed face of a convex label, as seen by that label's membership test, near
/// `near`. Coverage there is zero because every ball around it leaves the label.
inline std::optional<Point> closed_face_point(const Classifier& c, const Point& near) {
  for (const auto& l : c.labels()) {
    if (std::holds_alternative<Predicate>(l.region)) continue;
    for (const auto& p : polytope_pieces(l.region))
    for (const auto& h : p.halfspaces()) {
      if (!h.closed()) continue;
      Point q = Hyperplane(h.normal(), h.offset()).project(near);
      Eigen::Index k = 0;
      h.normal().cwiseAbs().maxCoeff(&k);
      const double rest = h.normal().dot(q) - h.normal()[k] * q[k];
      q[k] = (h.offset() - rest) / h.normal()[k];
      for (int step = 0; step < 64; ++step) {
        if (h.normal().dot(q) == h.offset() && p.contains(q)) {
          try {
            const auto lq = label_of(c, q);
            if (!lq.refinement && lq.name == l.name) return q;
          } catch (const Error&) {
          }
        }
        q[k] = std::nextafter(q[k], (step % 2 == 0) ? std::numeric_limits<double>::infinity()
                                                    : -std::numeric_limits<double>::infinity());
        if (step % 2 == 1) q[k] = std::nextafter(q[k], -std::numeric_limits<double>::infinity());
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Empirical form of the characterization "infinite pointwise coverage iff refined linear": probes the
/// domain, reports a bounded- or zero-coverage witness, a third label, or a recovered separating
/// hyperplane. ExceedsCap at `cap` stands in for infinite coverage.
inline StructureVerdict classify_structure(const Classifier& c, const StructureOptions& options = {}) {
  StructureOptions opt = options;
  const double diam = c.diameter();
  if (!(opt.cap > 0.0)) opt.cap = 1e3 * diam;
  if (!(opt.tol > 0.0)) opt.tol = 1e-6 * diam;
  CoverageOptions cov;
  cov.cap = opt.cap;
  cov.tol = opt.tol;
  cov.budget = opt.budget;
  cov.seed = opt.seed;

  StructureVerdict v;
  v.cap = opt.cap;
  const Box box = c.domain_box();
  const std::size_t n = c.dimension();

  std::vector<Point> probes;
  std::vector<std::string> probe_labels;
  {
    Rng rng(mix_seed(opt.seed, 0x5eedULL));
    for (std::size_t i = 0; i < opt.probe_count; ++i) {
      Point p = uniform_in_box(rng, box.lo, box.hi);
      const auto l = label_of(c, p);
      if (l.refinement) continue;
      probes.push_back(std::move(p));
      probe_labels.push_back(l.name);
      if (std::find(v.observed_labels.begin(), v.observed_labels.end(), l.name) == v.observed_labels.end())
        v.observed_labels.push_back(l.name);
    }
  }
  v.probes = probes.size();
  if (v.observed_labels.size() <= 1) {
    v.kind = StructureVerdict::Kind::trivial;
    v.reason = "single label observed";
    return v;
  }

  // Coverage at every probe, in chunks so a witness ends the scan early; the first witness by probe
  // index wins regardless of scheduling.
  const std::size_t chunk = std::max<std::size_t>(1, thread_count());
  for (std::size_t start = 0; start < probes.size(); start += chunk) {
    const std::size_t len = std::min(chunk, probes.size() - start);
    auto results = parallel_map(len, [&](std::size_t i) {
      CoverageOptions o = cov;
      o.seed = mix_seed(opt.seed, start + i);
      return coverage_at(c, probes[start + i], o);
    });
    for (std::size_t i = 0; i < len; ++i) {
      if (results[i].exceeds_cap()) continue;
      v.kind = StructureVerdict::Kind::not_refined_linear;
      v.reason = results[i].is_zero() ? "zero_coverage" : "bounded_coverage";
      v.witness = probes[start + i];
      v.coverage = results[i];
      return v;
    }
  }

  if (v.observed_labels.size() > 2) {
    const std::string& third = v.observed_labels[2];
    const auto idx = static_cast<std::size_t>(
        std::find(probe_labels.begin(), probe_labels.end(), third) - probe_labels.begin());
    v.kind = StructureVerdict::Kind::not_refined_linear;
    v.reason = "third_label";
    v.witness = probes[idx];
    CoverageOptions o = cov;
    o.seed = mix_seed(opt.seed, idx);
    v.coverage = coverage_at(c, probes[idx], o);
    return v;
  }

  // Boundary points from differing-label probe pairs, in index order.
  const std::string& first = v.observed_labels[0];
  const std::size_t wanted = std::max<std::size_t>(4 * (n + 1), 12);
  std::vector<Point> boundary;
  for (std::size_t i = 0; i < probes.size() && boundary.size() < wanted; ++i)
    for (std::size_t j = i + 1; j < probes.size() && boundary.size() < wanted; ++j) {
      if (probe_labels[i] == probe_labels[j]) continue;
      const bool i_first = probe_labels[i] == first;
      boundary.push_back(detail::locate_boundary(c, i_first ? probes[i] : probes[j], i_first ? probes[j] : probes[i], first));
      break;
    }
  if (boundary.size() < n + 1) {
    v.kind = StructureVerdict::Kind::inconclusive;
    v.reason = "too few boundary points";
    return v;
  }

  Eigen::MatrixXd m(static_cast<Eigen::Index>(boundary.size()), static_cast<Eigen::Index>(n));
  Vector centroid = Vector::Zero(static_cast<Eigen::Index>(n));
  for (const auto& b : boundary) centroid += b;
  centroid /= static_cast<double>(boundary.size());
  for (std::size_t i = 0; i < boundary.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = (boundary[i] - centroid).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
  Vector normal = svd.matrixV().col(static_cast<Eigen::Index>(n) - 1);
  double offset = normal.dot(centroid);
  const std::size_t first_idx = static_cast<std::size_t>(std::find(probe_labels.begin(), probe_labels.end(), first) - probe_labels.begin());
  if (normal.dot(probes[first_idx]) > offset) {
    normal = -normal;
    offset = -offset;
  }
  v.fit_residual = 0.0;
  for (const auto& b : boundary) v.fit_residual = std::max(v.fit_residual, std::abs(normal.dot(b) - offset));
  if (!(v.fit_residual < opt.tol)) {
    v.kind = StructureVerdict::Kind::inconclusive;
    v.reason = "boundary points are not coplanar";
    return v;
  }
  const Hyperplane h(normal, offset);

  {
    Rng rng(mix_seed(opt.seed, 0xf2e5ULL));
    for (std::size_t i = 0; i < opt.probe_count; ++i) {
      const Point p = uniform_in_box(rng, box.lo, box.hi);
      const double side = h.signed_distance(p);
      if (std::abs(side) <= 1e3 * opt.tol) continue;
      const auto l = label_of(c, p);
      if (l.refinement) continue;
      const std::string& expected = side < 0.0 ? first : v.observed_labels[1];
      if (l.name != expected) {
        v.kind = StructureVerdict::Kind::inconclusive;
        v.reason = "fresh probe contradicts the fitted hyperplane";
        v.witness = p;
        return v;
      }
    }
  }

  if (c.is_ordinary()) {
    // A non-trivial ordinary classifier must put its decision boundary into some label.
    if (auto q = detail::closed_face_point(c, boundary.front())) {
      CoverageOptions o = cov;
      auto r = coverage_at(c, *q, o);
      if (!r.exceeds_cap()) {
        v.kind = StructureVerdict::Kind::not_refined_linear;
        v.reason = r.is_zero() ? "zero_on_boundary" : "bounded_coverage";
        v.witness = *q;
        v.coverage = r;
        return v;
      }
    }
    v.kind = StructureVerdict::Kind::inconclusive;
    v.reason = "ordinary classifier: its decision boundary belongs to a label";
    v.hyperplane = h;
    return v;
  }

  v.kind = StructureVerdict::Kind::refined_linear;
  v.hyperplane = h;
  return v;
}

struct GeneralizedLinearVerdict {
  bool generalized = false;
  std::optional<Hyperplane> hyperplane;  // unit normal
  std::vector<std::string> halfspace_labels;
  std::string reason;
};

/// Ordinary classifiers whose two non-negligible labels are complementary open/closed halfspaces up to
/// pieces of the separating hyperplane, which may be split arbitrarily among labels.
inline GeneralizedLinearVerdict is_generalized_binary_linear(const Classifier& c, std::size_t probe_count,
                                                             std::uint64_t seed) {
  GeneralizedLinearVerdict v;
  if (!c.is_ordinary()) {
    v.reason = "classifier has a refinement set";
    return v;
  }
  for (const auto& l : c.labels())
    if (std::holds_alternative<Predicate>(l.region)) {
      v.reason = "label " + l.name + " is analytic";
      return v;
    }
  std::vector<const NamedRegion*> full;
  std::vector<HPolytope> thin;
  for (const auto& l : c.labels()) {
    if (is_negligible_region(l.region)) {
      for (auto& p : polytope_pieces(l.region)) thin.push_back(std::move(p));
    } else {
      full.push_back(&l);
    }
  }
  if (full.size() != 2) {
    v.reason = std::to_string(full.size()) + " non-negligible labels";
    return v;
  }
  std::vector<Halfspace> halves;
  for (const auto* l : full) {
    std::optional<Halfspace> half;
    for (auto& p : polytope_pieces(l->region)) {
      if (is_negligible_region(p)) {
        thin.push_back(std::move(p));
        continue;
      }
      if (p.size() != 1 || half) {
        v.reason = "label " + l->name + " is not a halfspace up to negligible pieces";
        return v;
      }
      half = p.halfspaces().front();
    }
    const Vector inward = -half->normal() / half->normal_norm();
    const Point on_boundary = Hyperplane(half->normal(), half->offset()).project(Vector::Zero(static_cast<Eigen::Index>(c.dimension())));
    const Point inside = on_boundary + inward * (1e-6 * c.diameter());
    // Certificate: the label contains an open halfspace bounded at a point on its boundary.
    if (!halfspace_certificate(c, inside, inward, probe_count, seed).accepted()) {
      v.reason = "label " + l->name + " fails the halfspace certificate";
      return v;
    }
    halves.push_back(*half);
    v.halfspace_labels.push_back(l->name);
  }
  const Vector u0 = halves[0].normal() / halves[0].normal_norm();
  const Vector u1 = halves[1].normal() / halves[1].normal_norm();
  const double b0 = halves[0].offset() / halves[0].normal_norm();
  const double b1 = halves[1].offset() / halves[1].normal_norm();
  const double scale = 1.0 + std::abs(b0);
  if (u0.dot(u1) > -1.0 + 1e-12 || std::abs(b0 + b1) > 1e-9 * scale) {
    v.reason = "the two halfspace boundaries do not coincide";
    return v;
  }
  const Hyperplane h(u0, b0);
  for (const auto& p : thin) {
    bool inside = false;
    const auto& hs = p.halfspaces();
    for (std::size_t i = 0; i < hs.size() && !inside; ++i)
      for (std::size_t j = 0; j < hs.size() && !inside; ++j) {
        if (i == j || !hs[i].closed() || !hs[j].closed()) continue;
        const Vector a = hs[i].normal() / hs[i].normal_norm();
        const Vector b = hs[j].normal() / hs[j].normal_norm();
        if (a.dot(u0) < 1.0 - 1e-12 || b.dot(u0) > -1.0 + 1e-12) continue;
        const double ai = hs[i].offset() / hs[i].normal_norm();
        const double bj = -hs[j].offset() / hs[j].normal_norm();
        inside = std::abs(ai - b0) <= 1e-9 * scale && std::abs(bj - b0) <= 1e-9 * scale;
      }
    if (!inside && !has_inconsistent_pair(p)) {
      v.reason = "a negligible piece leaves the separating hyperplane";
      return v;
    }
  }
  v.generalized = true;
  v.hyperplane = h;
  v.reason = "two complementary halfspaces up to hyperplane pieces";
  return v;
}

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_STRUCTURE_HPP
