#ifndef COVERAGE_LAB_TESTS_ORACLES_HPP
#define COVERAGE_LAB_TESTS_ORACLES_HPP

// Brute-force reference computations for tests. Nothing here calls the library's projection,
// bisection or anchor search; only plain Eigen vectors are shared.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Depth = std::function<double(const Vec&)>;  // 1-Lipschitz; >= 0 exactly where the ball B(c, value) fits

struct Row {
  Vec a;
  double b;
};

inline double slack(const Row& h, const Vec& c) { return (h.b - h.a.dot(c)) / h.a.norm(); }

inline Depth polytope_depth(std::vector<Row> rows) {
  return [rows = std::move(rows)](const Vec& c) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& h : rows) m = std::min(m, slack(h, c));
    return m;
  };
}

struct Rect {
  double x0, y0, x1, y1;
};

/// Signed depth of a finite union of closed rectangles in the plane: distance to the complement,
/// computed over the cells of the grid spanned by all rectangle edges.
inline Depth rect_union_depth(std::vector<Rect> rects) {
  std::vector<double> xs{-1e300, 1e300}, ys{-1e300, 1e300};
  for (const auto& r : rects) {
    xs.push_back(r.x0), xs.push_back(r.x1);
    ys.push_back(r.y0), ys.push_back(r.y1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  auto inside = [rects](double x, double y) {
    for (const auto& r : rects)
      if (x >= r.x0 && x <= r.x1 && y >= r.y0 && y <= r.y1) return true;
    return false;
  };
  auto mid = [](double a, double b) {
    if (a < -1e299) return b - 1.0;
    if (b > 1e299) return a + 1.0;
    return 0.5 * (a + b);
  };
  std::vector<Rect> outside;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < ys.size(); ++j)
      if (!inside(mid(xs[i], xs[i + 1]), mid(ys[j], ys[j + 1]))) outside.push_back({xs[i], ys[j], xs[i + 1], ys[j + 1]});
  return [outside, inside](const Vec& c) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& r : outside) {
      const double dx = std::max({r.x0 - c[0], 0.0, c[0] - r.x1});
      const double dy = std::max({r.y0 - c[1], 0.0, c[1] - r.y1});
      d = std::min(d, std::hypot(dx, dy));
    }
    if (inside(c[0], c[1])) return d;
    return -d;  // d is 0 here unless c is in a gap; either way a valid 1-Lipschitz lower value
  };
}

/// Branch and bound over center cells: is there c with depth(c) >= r and |x - c| <= r? Cells whose
/// center value plus half-diagonal is negative are pruned (both terms are 1-Lipschitz).
inline bool feasible(const Depth& depth, const Vec& x, double r, double resolution) {
  const auto n = x.size();
  struct Cell {
    Vec center;
    double half;
  };
  std::vector<Cell> cells{{x, r}};
  while (!cells.empty()) {
    std::vector<Cell> next;
    for (const auto& cell : cells) {
      const double g = std::min(depth(cell.center) - r, r - (x - cell.center).norm());
      if (g >= 0.0) return true;
      const double diag = cell.half * std::sqrt(static_cast<double>(n));
      if (g + diag < 0.0) continue;
      if (diag < resolution) return true;  // undecided at this resolution
      for (long mask = 0; mask < (1L << n); ++mask) {
        Vec c = cell.center;
        for (Eigen::Index i = 0; i < n; ++i) c[i] += ((mask >> i) & 1 ? 0.5 : -0.5) * cell.half;
        next.push_back({c, 0.5 * cell.half});
      }
    }
    if (next.size() > 400000) return true;
    cells = std::move(next);
  }
  return false;
}

/// sup { r : some ball of radius r contains x and fits } by bisection on [0, hi]; returns hi when hi
/// is still feasible.
inline double coverage(const Depth& depth, const Vec& x, double hi, double tol = 1e-7) {
  if (depth(x) < 0.0) return 0.0;
  if (feasible(depth, x, hi, tol * 1e-2)) return hi;
  double lo = std::max(0.0, depth(x));
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(depth, x, mid, tol * 1e-2) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Exact distance from x to {c : a_i.c <= b_i} by enumerating active sets of size <= n.
/// Returns +inf when the set is empty.
inline double polytope_distance(const std::vector<Row>& rows, const Vec& x) {
  const auto n = x.size();
  const std::size_t m = rows.size();
  auto ok = [&](const Vec& c) {
    for (const auto& h : rows)
      if (h.a.dot(c) > h.b + 1e-9 * (1.0 + std::abs(h.b))) return false;
    return true;
  };
  double best = ok(x) ? 0.0 : std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!pick.empty()) {
      const auto k = static_cast<Eigen::Index>(pick.size());
      Eigen::MatrixXd a(k, n);
      Vec b(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        a.row(i) = rows[pick[static_cast<std::size_t>(i)]].a.transpose();
        b[i] = rows[pick[static_cast<std::size_t>(i)]].b;
      }
      Eigen::MatrixXd g = a * a.transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
      if (lu.rank() == k) {
        const Vec c = x - a.transpose() * lu.solve(a * x - b);
        if (ok(c)) best = std::min(best, (c - x).norm());
      }
    }
    if (static_cast<Eigen::Index>(pick.size()) == n) return;
    for (std::size_t i = start; i < m; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

/// Convex coverage via bisection on r with the active-set distance to the shrunken polytope.
inline double polytope_coverage(const std::vector<Row>& rows, const Vec& x, double hi, double tol = 1e-9) {
  auto feasible_r = [&](double r) {
    std::vector<Row> shrunk;
    for (const auto& h : rows) shrunk.push_back({h.a, h.b - r * h.a.norm()});
    return polytope_distance(shrunk, x) <= r;
  };
  if (feasible_r(hi)) return hi;
  double lo = 0.0;
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (feasible_r(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Distance from p to the graph of f over [lo, hi] by dense sampling plus local refinement.
inline double graph_distance(const std::function<double(double)>& f, const Vec& p, double lo, double hi) {
  const int steps = 20000;
  double best = std::numeric_limits<double>::infinity();
  double best_t = lo;
  for (int i = 0; i <= steps; ++i) {
    const double t = lo + (hi - lo) * i / steps;
    const double d = std::hypot(t - p[0], f(t) - p[1]);
    if (d < best) best = d, best_t = t;
  }
  double h = (hi - lo) / steps;
  for (int it = 0; it < 60; ++it) {
    for (double t : {best_t - h, best_t + h}) {
      const double d = std::hypot(t - p[0], f(t) - p[1]);
      if (d < best) best = d, best_t = t;
    }
    h *= 0.5;
  }
  return best;
}

}  // namespace oracle

#endif  // COVERAGE_LAB_TESTS_ORACLES_HPP
