// Coverage at a few points of a spec, plus its structure verdict.
// Usage: pointwise_coverage [spec.json]

#include <iostream>

#include "coverage_lab.hpp"

using namespace coverage_lab;

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : std::string(COVERAGE_LAB_SPEC_DIR) + "/fig3.json";
  try {
    const Classifier c = load_spec(path);
    const std::vector<Point> points = c.probe_points().empty() ? std::vector<Point>{Point::Zero(static_cast<Eigen::Index>(c.dimension()))}
                                                               : c.probe_points();
    for (const auto& x : points) {
      std::cout << format_point_compact(x) << "  ";
      try {
        const CoverageResult r = coverage_at(c, x, {});
        std::cout << to_string(r.kind);
        if (r.is_bounded()) std::cout << " " << r.radius;
        std::cout << " (" << to_string(r.method) << ")\n";
      } catch (const QueryError& e) {
        std::cout << "skipped: " << e.what() << "\n";
      }
    }
    const StructureVerdict v = classify_structure(c);
    std::cout << "structure: " << to_string(v.kind);
    if (!v.reason.empty()) std::cout << " (" << v.reason << ")";
    std::cout << "\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
