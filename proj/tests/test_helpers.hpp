#ifndef COVERAGE_LAB_TESTS_HELPERS_HPP
#define COVERAGE_LAB_TESTS_HELPERS_HPP

#include <string>
#include <vector>

#include "coverage_lab.hpp"
#include "oracles.hpp"

namespace testutil {

using namespace coverage_lab;

inline std::string spec(const std::string& name) { return std::string(COVERAGE_LAB_SPEC_DIR) + "/" + name; }

inline std::vector<oracle::Row> rows_of(const HPolytope& p) {
  std::vector<oracle::Row> out;
  for (const auto& h : p.halfspaces()) out.push_back({h.normal(), h.offset()});
  return out;
}

/// Random polytope containing a ball around z; bounded when `bounded`.
inline HPolytope random_polytope(Rng& rng, std::size_t n, std::size_t m, bool bounded = true) {
  const Point z = Point::Zero(static_cast<Eigen::Index>(n));
  if (bounded) return detail::random_bounded_polytope(rng, n, m, z, 3.0);
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < m; ++i) {
    Vector a = uniform_direction(rng, n);
    hs.emplace_back(a, 0.5 + 2.5 * uniform01(rng), Boundary::open);
  }
  return HPolytope(std::move(hs));
}

inline Point random_interior_point(Rng& rng, const HPolytope& p, double w) {
  const auto n = static_cast<Eigen::Index>(p.dim());
  for (int i = 0; i < 100000; ++i) {
    Point x = uniform_in_box(rng, Vector::Constant(n, -w), Vector::Constant(n, w));
    if (p.contains(x) && p.inner_radius_at(x) > 0.0) return x;
  }
  return Point::Zero(n);
}

/// Coverage value of a result: 0, radius or cap.
inline double value(const CoverageResult& r) { return radius_or_cap(r); }

}  // namespace testutil

#endif  // COVERAGE_LAB_TESTS_HELPERS_HPP
