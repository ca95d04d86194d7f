#ifndef COVERAGE_LAB_COVERAGE_HPP
#define COVERAGE_LAB_COVERAGE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coverage_lab/classifier.hpp"

namespace coverage_lab {

/// How a ball was shown to lie inside its label.
struct AnchorCertificate {
  enum class Kind { exact, sampled };
  Kind kind = Kind::exact;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  static AnchorCertificate exact() { return {Kind::exact, 0, 0}; }
  static AnchorCertificate sampled(std::size_t m, std::uint64_t seed) { return {Kind::sampled, m, seed}; }

  friend bool operator==(const AnchorCertificate& a, const AnchorCertificate& b) {
    return a.kind == b.kind && a.samples == b.samples && a.seed == b.seed;
  }
};

/// An open ball containing `anchored_point` (strictly) and certified to lie inside `label`.
struct Anchor {
  Ball ball;
  Point anchored_point;
  std::string label;
  AnchorCertificate certificate;

  friend bool operator==(const Anchor& a, const Anchor& b) {
    return a.ball == b.ball && same_point(a.anchored_point, b.anchored_point) && a.label == b.label &&
           a.certificate == b.certificate;
  }
};

/// Coverage of a classifier at a point: Zero, Bounded(radius) or ExceedsCap(cap).
struct CoverageResult {
  enum class Kind { zero, bounded, exceeds_cap };
  enum class Method { exact, lower_bound };

  Kind kind = Kind::zero;
  Method method = Method::exact;
  double radius = 0.0;  // Bounded: the supremum (exact) or best certified radius (lower_bound)
  double cap = 0.0;
  std::optional<Anchor> witness;  // Bounded
  std::vector<Anchor> witnesses;  // ExceedsCap: strictly increasing radii, last >= cap
  // lower_bound certification parameters
  std::size_t samples = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;

  bool is_zero() const { return kind == Kind::zero; }
  bool is_bounded() const { return kind == Kind::bounded; }
  bool exceeds_cap() const { return kind == Kind::exceeds_cap; }

  friend bool operator==(const CoverageResult& a, const CoverageResult& b) {
    return a.kind == b.kind && a.method == b.method && a.radius == b.radius && a.cap == b.cap && a.witness == b.witness &&
           a.witnesses == b.witnesses && a.samples == b.samples && a.delta == b.delta && a.seed == b.seed;
  }
};

inline const char* to_string(CoverageResult::Kind k) {
  switch (k) {
    case CoverageResult::Kind::zero: return "Zero";
    case CoverageResult::Kind::bounded: return "Bounded";
    default: return "ExceedsCap";
  }
}
inline const char* to_string(CoverageResult::Method m) { return m == CoverageResult::Method::exact ? "exact" : "lower_bound"; }

/// Total preorder Zero < Bounded(r) < Bounded(r') (r < r') < ExceedsCap. Returns -1, 0 or 1.
inline int compare(const CoverageResult& a, const CoverageResult& b) {
  auto rank = [](const CoverageResult& r) { return static_cast<int>(r.kind); };
  if (rank(a) != rank(b)) return rank(a) < rank(b) ? -1 : 1;
  if (a.kind != CoverageResult::Kind::bounded || a.radius == b.radius) return 0;
  return a.radius < b.radius ? -1 : 1;
}

struct CoverageOptions {
  double cap = 0.0;  // <= 0: 1e6 * domain diameter
  std::size_t budget = 10000;  // samples per sampled ball certification
  std::uint64_t seed = 0;
  double tol = 0.0;  // <= 0: 1e-6 * domain diameter
  double delta = 0.05;

  CoverageOptions resolved(const Classifier& c) const {
    CoverageOptions o = *this;
    const double d = c.diameter();
    if (!(o.cap > 0.0)) o.cap = 1e6 * d;
    if (!(o.tol > 0.0)) o.tol = 1e-6 * d;
    return o;
  }
};

namespace detail {

struct CenterRadius {
  Point center;
  double radius;
};

/// Decides whether some ball of radius r inside P contains x in its closure, via the projection of x onto
/// the inner parallel body. Returns the center found, if any.
inline std::optional<Point> feasible_center(const Point& x, const HPolytope& closed_p, double r, double tol) {
  const HPolytope s = shrink_polytope(closed_p, r);
  if (has_inconsistent_pair(s)) return std::nullopt;
  const double feas_tol = std::max(tol * 1e-3, 1e-14 * (1.0 + r));
  // A slightly infeasible iterate still carries a ball of radius r - violation.
  const double slop = 0.1 * tol;
  auto accept = [&](const ProjectionState& p) { return p.max_violation <= slop && p.distance + p.max_violation <= r; };
  auto st = dykstra_project(x, s, feas_tol, kProjectionCycleCap, [&](const ProjectionState& p) {
    return (p.max_violation <= feas_tol && p.distance <= r) || accept(p) || p.lower_bound > r;
  });
  if ((st.max_violation <= feas_tol && st.distance <= r) || accept(st)) return st.point;
  return std::nullopt;
}

/// Interpolates the feasible pair (c, r) toward (x, rho_x), which is strictly valid, until the pair is
/// numerically valid: |x - c_t| < r_t <= inner_radius(c_t). Lands at radius `target` when possible.
inline std::optional<CenterRadius> strict_anchor(const Point& x, const HPolytope& p, const Point& c, double r,
                                                 double target) {
  const double rho_x = p.inner_radius_at(x);
  const double r_c = std::min(r, p.inner_radius_at(c));
  double t = (r_c > rho_x && target < r_c) ? (r_c - target) / (r_c - rho_x) : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Point ct = (1.0 - t) * c + t * x;
    const double rt = std::min((1.0 - t) * r_c + t * rho_x, p.inner_radius_at(ct));
    if (rt > 0.0 && (x - ct).norm() < rt) return CenterRadius{ct, rt};
    t = (t == 0.0) ? 1e-12 : std::min(1.0, 2.0 * t);
    if (t >= 1.0 && attempt > 0) {
      if (rho_x > 0.0) return CenterRadius{x, rho_x};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

inline Anchor make_anchor(const Point& center, double radius, const Point& x, const std::string& label,
                          AnchorCertificate cert) {
  return Anchor{Ball(center, radius), x, label, cert};
}

/// Witnesses at radii cap/4, cap/2 and `top.radius` (>= cap), shrinking `top` toward x. The homothety
/// c' = x + (r'/r)(c - x) maps B(c, r) into itself, so the smaller balls inherit the certificate.
inline std::vector<Anchor> growth_witnesses(const Anchor& top, double cap) {
  std::vector<Anchor> out;
  const Point& x = top.anchored_point;
  for (double r : {cap / 4.0, cap / 2.0}) {
    if (!(r < top.ball.radius)) continue;
    const double s = r / top.ball.radius;
    out.push_back(make_anchor(x + s * (top.ball.center - x), r, x, top.label, top.certificate));
  }
  out.push_back(top);
  return out;
}

}  // namespace detail

/// Exact coverage at x of a convex label region, by bisection on the radius over [0, cap] with the
/// projection feasibility oracle. Zero when x sits on a closed face; ExceedsCap when a radius-cap anchor
/// exists.
inline CoverageResult coverage_exact_convex(const Point& x, const LabelRegion& region, double cap, double tol,
                                            const std::string& label = {}) {
  if (!(cap > 0.0) || !(tol > 0.0)) throw Error("cap and tol must be positive");
  const HPolytope p = as_polytope(region);
  require_same_dim(p.dim(), x);
  if (has_inconsistent_pair(p)) throw EmptyRegion();
  if (!p.contains(x)) throw PointNotInRegion();

  CoverageResult out;
  out.method = CoverageResult::Method::exact;
  out.cap = cap;
  const double rho_x = p.inner_radius_at(x);
  if (!(rho_x > 0.0)) {
    out.kind = CoverageResult::Kind::zero;
    return out;
  }

  std::vector<Halfspace> closed_hs;
  for (const auto& h : p.halfspaces()) closed_hs.push_back(h.with_boundary(Boundary::closed));
  const HPolytope closed_p(std::move(closed_hs));

  // Unbounded growth check at slightly beyond cap so the final witness reaches cap.
  const double probe = cap + tol;
  if (rho_x >= probe || detail::feasible_center(x, closed_p, probe, tol)) {
    std::optional<Anchor> top;
    if (const auto* h = std::get_if<Halfspace>(&region)) {
      // Ray construction: centers on the line through x orthogonal to the boundary,
      // radius |o - x| + alpha with alpha < dist(x, boundary).
      const double d = h->slack(x);
      const double alpha = d / 2.0;
      const Vector inward = -h->normal() / h->normal_norm();
      const double t = std::max(0.0, cap - alpha);
      const Point o = x + t * inward;
      const double r = t + alpha;
      if (h->slack(o) >= r && (o - x).norm() < r) top = detail::make_anchor(o, r, x, label, AnchorCertificate::exact());
    }
    if (!top) {
      const Point c = rho_x >= probe ? x : *detail::feasible_center(x, closed_p, probe, tol);
      if (auto cr = detail::strict_anchor(x, p, c, probe, cap); cr && cr->radius >= cap)
        top = detail::make_anchor(cr->center, cr->radius, x, label, AnchorCertificate::exact());
    }
    if (top) {
      out.kind = CoverageResult::Kind::exceeds_cap;
      out.cap = cap;
      out.witnesses = detail::growth_witnesses(*top, cap);
      return out;
    }
  }

  double lo = std::min(rho_x, cap);
  double hi = cap;
  Point lo_center = x;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (auto c = detail::feasible_center(x, closed_p, mid, tol)) {
      lo = mid;
      lo_center = *c;
    } else {
      hi = mid;
    }
  }
  out.kind = CoverageResult::Kind::bounded;
  out.radius = 0.5 * (lo + hi);
  const double target = std::max(out.radius - tol, 0.5 * rho_x);
  if (auto cr = detail::strict_anchor(x, p, lo_center, lo, std::min(target, lo)))
    out.witness = detail::make_anchor(cr->center, cr->radius, x, label, AnchorCertificate::exact());
  else
    out.witness = detail::make_anchor(x, rho_x, x, label, AnchorCertificate::exact());
  return out;
}

namespace detail {

/// Multi-start anchor search with sampled (or per-piece exact) certification.
class AnchorSearch {
 public:
  AnchorSearch(const LabelRegion& region, std::string label, Point x, const CoverageOptions& opt)
      : region_(region), label_(std::move(label)), x_(std::move(x)), opt_(opt), n_(static_cast<std::size_t>(x_.size())) {
    if (const auto* u = std::get_if<UnionOfPolytopes>(&region_)) pieces_ = u->pieces;
    else if (is_convex(region_)) pieces_ = {as_polytope(region_)};
  }

  /// Starts from a known anchor whose exact supremum `sup` may exceed its witness radius.
  void seed_with(const Anchor& a, double sup) {
    consider(a);
    floor_sup_ = std::max(floor_sup_, sup);
  }

  CoverageResult run() {
    CoverageResult out;
    out.method = CoverageResult::Method::lower_bound;
    out.cap = opt_.cap;
    out.samples = opt_.budget;
    out.delta = opt_.delta;
    out.seed = opt_.seed;
    if (opt_.budget == 0 && !best_) {
      out.kind = CoverageResult::Kind::zero;
      return out;
    }

    // x-centered start
    if (!best_) {
      if (auto a = max_radius_anchor(x_, 0.0)) consider(*a);
    } else {
      improve_from(x_);
    }
    if (!reached_cap()) {
      const double ref = best_ ? best_->ball.radius : std::max(opt_.tol, 1e-3 * opt_.cap / 1e6);
      for (double scale : {0.5, 1.0}) {
        for (const auto& u : start_directions()) {
          improve_from(x_ + (scale * ref) * u);
          if (reached_cap()) break;
        }
        if (reached_cap()) break;
      }
    }
    for (int round = 0; round < 3 && best_ && !reached_cap(); ++round) {
      const double before = best_->ball.radius;
      pattern_search();
      grow();
      if (!(best_->ball.radius > before * (1.0 + 1e-6))) break;
    }

    if (!best_ || best_->ball.radius < opt_.tol) {
      out.kind = CoverageResult::Kind::zero;
    } else if (reached_cap()) {
      out.kind = CoverageResult::Kind::exceeds_cap;
      out.witnesses = growth_witnesses(*best_, opt_.cap);
    } else {
      out.kind = CoverageResult::Kind::bounded;
      out.radius = std::max(best_->ball.radius, floor_sup_);
      out.witness = best_;
    }
    return out;
  }

 private:
  bool member(const Point& p) const {
    try {
      return region_contains(region_, p);
    } catch (const EvalError&) {
      return false;
    }
  }

  bool reached_cap() const { return best_ && best_->ball.radius >= opt_.cap; }

  /// Certifies B(c, r) as an anchor for x, or returns nothing.
  std::optional<Anchor> certify(const Point& c, double r) {
    if (!(r > 0.0) || !std::isfinite(r) || !((x_ - c).norm() < r)) return std::nullopt;
    const Ball b(c, r);
    for (const auto& p : pieces_)
      if (ball_in_polytope(b, p)) return Anchor{b, x_, label_, AnchorCertificate::exact()};
    if (is_convex(region_) || opt_.budget == 0) return std::nullopt;
    const std::uint64_t s = mix_seed(opt_.seed, counter_++);
    if (sample_ball(b, [&](const Point& p) { return member(p); }, opt_.budget, s).accepted())
      return Anchor{b, x_, label_, AnchorCertificate::sampled(opt_.budget, s)};
    return std::nullopt;
  }

  /// Largest certified radius at center c, searched above `floor` by doubling then bisection.
  std::optional<Anchor> max_radius_anchor(const Point& c, double floor) {
    const double dist = (x_ - c).norm();
    double lo = std::max(floor, dist);
    std::optional<Anchor> best;
    double r = lo > 0.0 ? lo * (1.0 + 1e-6) + opt_.tol : std::max(opt_.tol, 1e-9);
    double hi = std::numeric_limits<double>::infinity();
    while (true) {
      r = std::min(r, opt_.cap);
      if (auto a = certify(c, r)) {
        best = a;
        lo = r;
        if (r >= opt_.cap) return best;
        r *= 2.0;
      } else {
        hi = r;
        break;
      }
    }
    if (!best) {
      // nothing above the floor; look below it only when there is no floor
      if (floor > 0.0) return std::nullopt;
      lo = dist;
    }
    while (hi - lo > std::max(opt_.tol, 1e-4 * lo)) {
      const double mid = 0.5 * (lo + hi);
      if (auto a = certify(c, mid)) {
        best = a;
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return best;
  }

  void consider(const Anchor& a) {
    if (!best_ || a.ball.radius > best_->ball.radius) best_ = a;
  }

  bool improve_from(const Point& c) {
    const double floor = best_ ? best_->ball.radius : 0.0;
    if (auto a = max_radius_anchor(c, floor); a && (!best_ || a->ball.radius > floor)) {
      consider(*a);
      return true;
    }
    return false;
  }

  std::vector<Vector> start_directions() {
    if (dirs_.empty()) {
      Rng rng(mix_seed(opt_.seed, 0xd1a5ULL));
      const std::size_t k = std::max<std::size_t>(8, 4 * n_);
      for (std::size_t i = 0; i < k; ++i) dirs_.push_back(uniform_direction(rng, n_));
      std::sort(dirs_.begin(), dirs_.end(), [](const Vector& a, const Vector& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
      });
    }
    return dirs_;
  }

  void pattern_search() {
    std::vector<Vector> moves;
    for (std::size_t i = 0; i < n_; ++i) {
      Vector e = Vector::Zero(static_cast<Eigen::Index>(n_));
      e[static_cast<Eigen::Index>(i)] = 1.0;
      moves.push_back(e);
      moves.push_back(-e);
    }
    for (const auto& d : start_directions()) moves.push_back(d);
    double step = best_->ball.radius / 2.0;
    std::size_t evals = 0;
    while (step > std::max(opt_.tol, 1e-4 * best_->ball.radius) && evals < 400 && !reached_cap()) {
      bool moved = false;
      const Point c = best_->ball.center;
      for (const auto& d : moves) {
        ++evals;
        if (improve_from(c + step * d)) {
          moved = true;
          break;
        }
      }
      if (!moved) step /= 2.0;
    }
  }

  /// Doubles the anchor along the direction from x to its center, keeping a fixed slack alpha:
  /// centers x + (R - alpha) s with radius R, perturbing s by about sqrt(alpha / R) when the ray fails.
  void grow() {
    if (!best_) return;
    Vector s = best_->ball.center - x_;
    const double off = s.norm();
    if (!(off > 0.0)) return;
    s /= off;
    const double alpha = 0.5 * (best_->ball.radius - off);
    if (!(alpha > 0.0)) return;
    Rng rng(mix_seed(opt_.seed, 0x9e0ULL + counter_));
    while (!reached_cap()) {
      const double R = std::min(2.0 * best_->ball.radius, opt_.cap);
      const double sigma = std::sqrt(alpha / R);
      bool grew = false;
      for (int attempt = 0; attempt < 24 && !grew; ++attempt) {
        Vector dir = s;
        if (attempt > 0) {
          dir = s + sigma * uniform_direction(rng, n_);
          dir.normalize();
        }
        if (auto a = certify(x_ + (R - alpha) * dir, R)) {
          consider(*a);
          s = dir;
          grew = true;
        }
      }
      if (!grew) break;
    }
  }

  const LabelRegion& region_;
  std::string label_;
  Point x_;
  CoverageOptions opt_;
  std::size_t n_;
  std::vector<HPolytope> pieces_;
  std::vector<Vector> dirs_;
  std::optional<Anchor> best_;
  double floor_sup_ = 0.0;
  std::uint64_t counter_ = 1;
};

inline std::string require_label(const Classifier& c, const Point& x) {
  LabelLookup l;
  try {
    l = label_of(c, x);
  } catch (const NoLabel&) {
    throw PointNotInAnyLabel();
  }
  if (l.refinement) throw RefinementPoint();
  return l.name;
}

}  // namespace detail

/// Multi-start sampled search for the largest certified anchor at x. The result is always a lower
/// bound; a ball is accepted when `budget` samples (half near its surface) all fall in the label, or when
/// a convex piece of the label provably contains it.
inline CoverageResult coverage_sampled(const Classifier& c, const Point& x, const CoverageOptions& options) {
  const CoverageOptions opt = options.resolved(c);
  const std::string label = detail::require_label(c, x);
  detail::AnchorSearch search(c.region(label), label, x, opt);
  return search.run();
}

/// Coverage of C at x. Convex labels are exact; unions start from the best per-piece exact value and
/// try to beat it with balls straddling pieces; analytic labels are fully sampled.
inline CoverageResult coverage_at(const Classifier& c, const Point& x, const CoverageOptions& options) {
  const CoverageOptions opt = options.resolved(c);
  const std::string label = detail::require_label(c, x);
  const LabelRegion& region = c.region(label);
  if (is_convex(region)) return coverage_exact_convex(x, region, opt.cap, opt.tol, label);
  if (const auto* u = std::get_if<UnionOfPolytopes>(&region)) {
    detail::AnchorSearch search(region, label, x, opt);
    for (const auto& piece : u->pieces) {
      if (!piece.contains(x)) continue;
      CoverageResult r = coverage_exact_convex(x, LabelRegion(piece), opt.cap, opt.tol, label);
      if (r.exceeds_cap()) {
        r.method = CoverageResult::Method::lower_bound;
        return r;
      }
      if (r.is_bounded() && r.witness) search.seed_with(*r.witness, r.radius);
    }
    return search.run();
  }
  detail::AnchorSearch search(region, label, x, opt);
  return search.run();
}

/// Checks x in A strictly and A inside the label of x: exact when a convex piece of the label decides it,
/// otherwise by m-sample falsification.
inline Certificate certify_anchor(const Classifier& c, const Anchor& a, std::size_t m, std::uint64_t seed) {
  if (!a.ball.contains(a.anchored_point)) return Certificate::refuted(a.anchored_point);
  LabelLookup l;
  try {
    l = label_of(c, a.anchored_point);
  } catch (const Error&) {
    return Certificate::refuted(a.anchored_point);
  }
  if (l.refinement || l.name != a.label) return Certificate::refuted(a.anchored_point);
  const LabelRegion& region = c.region(a.label);
  if (is_convex(region)) {
    const HPolytope p = as_polytope(region);
    if (ball_in_polytope(a.ball, p)) return Certificate::proven();
    // witness: step from the center toward the most violated face, just inside the ball
    std::size_t worst = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p.halfspaces()[i].slack(a.ball.center) < p.halfspaces()[worst].slack(a.ball.center)) worst = i;
    const Halfspace& h = p.halfspaces()[worst];
    const Vector u = h.normal() / h.normal_norm();
    const double step = std::min(a.ball.radius * (1.0 - 1e-9), std::max(0.0, h.slack(a.ball.center)) + 1e-9 * a.ball.radius);
    Point w = a.ball.center + step * u;
    if (a.ball.contains(w) && !p.contains(w)) return Certificate::refuted(std::move(w));
    return Certificate::refuted();
  }
  if (const auto* u = std::get_if<UnionOfPolytopes>(&region))
    for (const auto& piece : u->pieces)
      if (ball_in_polytope(a.ball, piece)) return Certificate::proven();
  return sample_ball(
      a.ball,
      [&](const Point& p) {
        try {
          return region_contains(region, p);
        } catch (const EvalError&) {
          return false;
        }
      },
      m, seed);
}

/// Certificate parameters recorded in the anchor itself.
inline Certificate certify_anchor(const Classifier& c, const Anchor& a) {
  return certify_anchor(c, a, a.certificate.samples, a.certificate.seed);
}

/// Anchor of radius r < a.radius for the same point, nested in a: the center moves from a's center
/// toward the anchored point just far enough for the smaller ball to still contain it.
inline Anchor shrink_anchor(const Anchor& a, double r) {
  if (!(r > 0.0) || !(r <= a.ball.radius)) throw Error("shrink radius must be in (0, anchor radius]");
  const Point& x = a.anchored_point;
  const Vector to_x = x - a.ball.center;
  const double d = to_x.norm();
  const double room = a.ball.radius - r;
  Point c = (d <= room) ? x : Point(a.ball.center + (room / d) * to_x);
  return Anchor{Ball(std::move(c), r), x, a.label, a.certificate};
}

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_COVERAGE_HPP
