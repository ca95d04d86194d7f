#ifndef COVERAGE_LAB_GEOMETRY_HPP
#define COVERAGE_LAB_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "coverage_lab/errors.hpp"

namespace coverage_lab {

using Vector = Eigen::VectorXd;
/// A point of R^n in feature units. No rescaling is ever applied.
using Point = Eigen::VectorXd;

inline bool all_finite(const Vector& v) { return v.allFinite(); }

/// Coordinate-wise equality; vectors of different sizes are unequal.
inline bool same_point(const Vector& a, const Vector& b) { return a.size() == b.size() && (a.array() == b.array()).all(); }

inline void require_same_dim(std::size_t expected, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != expected) throw DimensionMismatch(expected, static_cast<std::size_t>(v.size()));
}

inline Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p[i++] = c;
  return p;
}

enum class Boundary { open, closed };

/// Open ball B(center, radius); the boundary sphere is excluded.
struct Ball {
  Point center;
  double radius = 0.0;

  Ball() = default;
  Ball(Point c, double r) : center(std::move(c)), radius(r) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("ball radius must be positive and finite");
    if (!all_finite(center)) throw Error("ball center must be finite");
  }

  std::size_t dim() const { return static_cast<std::size_t>(center.size()); }
  bool contains(const Point& p) const { return (p - center).norm() < radius; }

  friend bool operator==(const Ball& a, const Ball& b) { return same_point(a.center, b.center) && a.radius == b.radius; }
};

/// {x : a.x < b} (open) or {x : a.x <= b} (closed).
class Halfspace {
 public:
  Halfspace() = default;
  Halfspace(Vector normal, double offset, Boundary boundary)
      : normal_(std::move(normal)), offset_(offset), boundary_(boundary) {
    if (normal_.size() == 0) throw Error("halfspace normal must have dimension >= 1");
    if (!all_finite(normal_) || !std::isfinite(offset_)) throw Error("halfspace coefficients must be finite");
    norm_ = normal_.norm();
    if (!(norm_ > 0.0)) throw Error("halfspace normal must be nonzero");
  }

  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }
  Boundary boundary() const { return boundary_; }
  bool closed() const { return boundary_ == Boundary::closed; }
  double normal_norm() const { return norm_; }
  std::size_t dim() const { return static_cast<std::size_t>(normal_.size()); }

  /// Signed distance from p to the bounding hyperplane, positive inside.
  double slack(const Point& p) const {
    require_same_dim(dim(), p);
    return (offset_ - normal_.dot(p)) / norm_;
  }

  bool contains(const Point& p) const {
    require_same_dim(dim(), p);
    const double v = normal_.dot(p);
    return closed() ? v <= offset_ : v < offset_;
  }
  bool closure_contains(const Point& p) const {
    require_same_dim(dim(), p);
    return normal_.dot(p) <= offset_;
  }

  Halfspace with_boundary(Boundary b) const { return Halfspace(normal_, offset_, b); }

  friend bool operator==(const Halfspace& l, const Halfspace& r) {
    return l.boundary_ == r.boundary_ && l.offset_ == r.offset_ && l.normal_.size() == r.normal_.size() &&
           l.normal_ == r.normal_;
  }

 private:
  Vector normal_;
  double offset_ = 0.0;
  Boundary boundary_ = Boundary::closed;
  double norm_ = 1.0;
};

/// {x : a.x = b}.
class Hyperplane {
 public:
  Hyperplane() = default;
  Hyperplane(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset) {
    if (normal_.size() == 0 || !(normal_.norm() > 0.0)) throw Error("hyperplane normal must be nonzero");
  }

  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }
  std::size_t dim() const { return static_cast<std::size_t>(normal_.size()); }

  double signed_distance(const Point& p) const { return (normal_.dot(p) - offset_) / normal_.norm(); }
  Point project(const Point& p) const { return p - (signed_distance(p) / normal_.norm()) * normal_; }

  /// Same hyperplane with a unit normal.
  Hyperplane normalized() const {
    const double n = normal_.norm();
    return Hyperplane(normal_ / n, offset_ / n);
  }

 private:
  Vector normal_;
  double offset_ = 0.0;
};

/// Angle in radians between two lines through the origin (sign of the direction ignored).
inline double line_angle(const Vector& u, const Vector& v) {
  const double c = std::abs(u.dot(v)) / (u.norm() * v.norm());
  return std::acos(std::min(1.0, c));
}

/// Angle in radians between two directions.
inline double direction_angle(const Vector& u, const Vector& v) {
  const double c = u.dot(v) / (u.norm() * v.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Intersection of finitely many halfspaces. May be unbounded or empty.
class HPolytope {
 public:
  HPolytope() = default;
  explicit HPolytope(std::vector<Halfspace> halfspaces) : halfspaces_(std::move(halfspaces)) {
    if (halfspaces_.empty()) throw Error("polytope needs at least one halfspace");
    const std::size_t n = halfspaces_.front().dim();
    for (const auto& h : halfspaces_)
      if (h.dim() != n) throw DimensionMismatch(n, h.dim());
  }

  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  std::size_t size() const { return halfspaces_.size(); }
  std::size_t dim() const { return halfspaces_.front().dim(); }

  bool contains(const Point& p) const {
    return std::all_of(halfspaces_.begin(), halfspaces_.end(), [&](const Halfspace& h) { return h.contains(p); });
  }
  bool closure_contains(const Point& p) const {
    return std::all_of(halfspaces_.begin(), halfspaces_.end(),
                       [&](const Halfspace& h) { return h.closure_contains(p); });
  }

  /// Radius of the largest open ball centered at c inside the closure (negative when c is outside).
  double inner_radius_at(const Point& c) const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& h : halfspaces_) r = std::min(r, h.slack(c));
    return r;
  }

  /// Largest violation max_i (a_i.p - b_i) / |a_i|, clamped at zero.
  double max_violation(const Point& p) const { return std::max(0.0, -inner_radius_at(p)); }

  friend bool operator==(const HPolytope& l, const HPolytope& r) { return l.halfspaces_ == r.halfspaces_; }

 private:
  std::vector<Halfspace> halfspaces_;
};

inline HPolytope box_polytope(const Vector& lo, const Vector& hi, Boundary boundary = Boundary::closed) {
  std::vector<Halfspace> hs;
  const auto n = lo.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    hs.emplace_back(e, hi[i], boundary);
    hs.emplace_back(-e, -lo[i], boundary);
  }
  return HPolytope(std::move(hs));
}

/// Inner parallel body: B(c, r) lies in P iff c lies in shrink_polytope(P, r).
inline HPolytope shrink_polytope(const HPolytope& p, double r) {
  if (r < 0.0) throw Error("shrink radius must be nonnegative");
  if (r == 0.0) return p;
  std::vector<Halfspace> hs;
  hs.reserve(p.size());
  for (const auto& h : p.halfspaces()) hs.emplace_back(h.normal(), h.offset() - r * h.normal_norm(), h.boundary());
  return HPolytope(std::move(hs));
}

/// True when two constraints face each other with a negative gap (or a zero gap where either side is
/// open), which makes the system empty.
inline bool has_inconsistent_pair(const HPolytope& p) {
  const auto& hs = p.halfspaces();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      const Vector ui = hs[i].normal() / hs[i].normal_norm();
      const Vector uj = hs[j].normal() / hs[j].normal_norm();
      if (ui.dot(uj) > -1.0 + 1e-12) continue;
      // ui = -uj: need bi' >= -bj' where b' are normalized offsets
      const double gap = hs[i].offset() / hs[i].normal_norm() + hs[j].offset() / hs[j].normal_norm();
      if (gap < 0.0) return true;
      if (gap == 0.0 && (!hs[i].closed() || !hs[j].closed())) return true;
    }
  }
  return false;
}

/// State of the cyclic projection scheme after it stops.
struct ProjectionState {
  Point point;                 // current iterate
  double distance = 0.0;       // |x - point|
  double max_violation = 0.0;  // of `point` w.r.t. the closed constraints
  double lower_bound = 0.0;    // certified lower bound on dist(x, P) from the dual multipliers
  std::size_t cycles = 0;
  bool converged = false;
};

inline constexpr std::size_t kProjectionCycleCap = 100000;

/// Dykstra's cyclic projection of x onto the closure of P.
///
/// Each correction term is a nonnegative multiple of a constraint normal, so the multipliers double as a
/// dual certificate: for any lambda >= 0, dist(x, P) >= lambda.(Ax - b) / |A^T lambda|. The iteration
/// stops when the primal iterate is feasible to `tol` and the duality gap is below `tol`, when
/// `early_stop(state)` returns true, or after `max_cycles` cycles.
template <typename EarlyStop>
ProjectionState dykstra_project(const Point& x, const HPolytope& p, double tol, std::size_t max_cycles,
                                EarlyStop&& early_stop) {
  require_same_dim(p.dim(), x);
  const auto& hs = p.halfspaces();
  const std::size_t m = hs.size();
  std::vector<double> sq(m), mu(m, 0.0), viol_x(m);
  for (std::size_t i = 0; i < m; ++i) {
    sq[i] = hs[i].normal().squaredNorm();
    viol_x[i] = hs[i].normal().dot(x) - hs[i].offset();
  }
  ProjectionState st;
  st.point = x;
  Vector g(x.size());
  for (std::size_t cycle = 1; cycle <= max_cycles; ++cycle) {
    for (std::size_t i = 0; i < m; ++i) {
      const Vector& a = hs[i].normal();
      const double v = a.dot(st.point) + mu[i] * sq[i] - hs[i].offset();
      const double mu_new = std::max(0.0, v) / sq[i];
      if (mu_new != mu[i]) st.point += (mu[i] - mu_new) * a;
      mu[i] = mu_new;
    }
    st.cycles = cycle;
    st.max_violation = p.max_violation(st.point);
    st.distance = (st.point - x).norm();

    g.setZero();
    double num = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mu[i] == 0.0) continue;
      g += mu[i] * hs[i].normal();
      num += mu[i] * viol_x[i];
    }
    const double gn = g.norm();
    if (num <= 0.0) {
      st.lower_bound = 0.0;
    } else if (gn > 0.0) {
      st.lower_bound = num / gn;
    } else {
      st.lower_bound = std::numeric_limits<double>::infinity();
    }
    // The lower bound is also at least the distance to the most violated single constraint.
    for (std::size_t i = 0; i < m; ++i)
      st.lower_bound = std::max(st.lower_bound, viol_x[i] / std::sqrt(sq[i]));

    if (early_stop(static_cast<const ProjectionState&>(st))) return st;
    if (st.max_violation <= tol && st.distance - st.lower_bound <= tol) {
      st.converged = true;
      return st;
    }
  }
  return st;
}

inline ProjectionState dykstra_project(const Point& x, const HPolytope& p, double tol,
                                       std::size_t max_cycles = kProjectionCycleCap) {
  return dykstra_project(x, p, tol, max_cycles, [](const ProjectionState&) { return false; });
}

/// Nearest point of closure(P) to x and its distance, each accurate to `tol`.
/// Throws EmptyPolytope when the constraints are inconsistent.
inline std::pair<Point, double> project_onto_polytope(const Point& x, const HPolytope& p, double tol) {
  if (!(tol > 0.0)) throw Error("projection tolerance must be positive");
  require_same_dim(p.dim(), x);
  HPolytope closed_p = p;
  {
    std::vector<Halfspace> hs;
    for (const auto& h : p.halfspaces()) hs.push_back(h.with_boundary(Boundary::closed));
    closed_p = HPolytope(std::move(hs));
  }
  if (has_inconsistent_pair(closed_p)) throw EmptyPolytope();
  const auto st = dykstra_project(x, closed_p, tol);
  if (!st.converged && (st.max_violation > tol || std::isinf(st.lower_bound))) throw EmptyPolytope();
  return {st.point, st.distance};
}

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_GEOMETRY_HPP
