// Anchors of growing radius inside an open halfspace, and the direction estimates they give.

#include <iostream>

#include "coverage_lab.hpp"

using namespace coverage_lab;

int main() {
  const Halfspace h(make_point({1.0, 2.0}), 3.0, Boundary::open);
  const Point x = make_point({-1.0, -1.0});
  const auto anchors = orthogonal_ray_anchors(h, x, 12, "H");
  const DirectionEstimate e = estimate_asymptotic_direction(anchors, x);
  for (std::size_t i = 0; i < anchors.size(); ++i)
    std::cout << "r=" << anchors[i].ball.radius << "  angle to s*=" << e.residual_angles[i] << "\n";
  std::cout << "s* = " << format_point_compact(e.direction) << "\n";
  std::cout << "inward normal = " << format_point_compact(-h.normal().normalized()) << "\n";
}
