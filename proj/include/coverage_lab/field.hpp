#ifndef COVERAGE_LAB_FIELD_HPP
#define COVERAGE_LAB_FIELD_HPP

#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "coverage_lab/parallel.hpp"
#include "coverage_lab/report.hpp"

namespace coverage_lab {

struct SkippedPoint {
  Point point;
  std::string reason;

  friend bool operator==(const SkippedPoint& a, const SkippedPoint& b) { return same_point(a.point, b.point) && a.reason == b.reason; }
};

/// Coverage at a finite probe set, with inf/sup estimates of pointwise coverage over it.
struct CoverageField {
  std::vector<Point> points;
  std::vector<CoverageResult> results;
  double cap = 0.0;
  std::optional<CoverageResult> inf_estimate;  // empty when no point was computed
  std::optional<CoverageResult> sup_estimate;
  std::vector<SkippedPoint> skipped;

  friend bool operator==(const CoverageField& a, const CoverageField& b) {
    if (a.points.size() != b.points.size()) return false;
    for (std::size_t i = 0; i < a.points.size(); ++i)
      if (!same_point(a.points[i], b.points[i])) return false;
    return a.results == b.results && a.cap == b.cap && a.inf_estimate == b.inf_estimate &&
           a.sup_estimate == b.sup_estimate && a.skipped == b.skipped;
  }
};

/// Grid over `box` with counts[i] points along axis i, endpoints included, axis 0 varying fastest.
inline std::vector<Point> grid_points(const Box& box, const std::vector<std::size_t>& counts) {
  if (counts.size() != box.dim()) throw DimensionMismatch(box.dim(), counts.size());
  std::size_t total = 1;
  for (auto k : counts) {
    if (k == 0) throw Error("grid counts must be >= 1");
    total *= k;
  }
  std::vector<Point> out;
  out.reserve(total);
  std::vector<std::size_t> idx(counts.size(), 0);
  for (std::size_t t = 0; t < total; ++t) {
    Point p(static_cast<Eigen::Index>(counts.size()));
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      p[e] = counts[i] == 1 ? 0.5 * (box.lo[e] + box.hi[e])
                            : box.lo[e] + (box.hi[e] - box.lo[e]) * static_cast<double>(idx[i]) / static_cast<double>(counts[i] - 1);
    }
    out.push_back(std::move(p));
    for (std::size_t i = 0; i < counts.size() && ++idx[i] == counts[i]; ++i) idx[i] = 0;
  }
  return out;
}

/// Seed for the computation at x: a function of the run seed and the coordinates only, so a point gets
/// the same result in every probe set that contains it.
inline std::uint64_t point_seed(std::uint64_t seed, const Point& x) {
  std::uint64_t h = seed;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::uint64_t bits;
    const double v = x[i] == 0.0 ? 0.0 : x[i];
    std::memcpy(&bits, &v, sizeof bits);
    h = mix_seed(h, bits);
  }
  return h;
}

inline void update_estimates(CoverageField& f) {
  f.inf_estimate.reset();
  f.sup_estimate.reset();
  for (const auto& r : f.results) {
    if (!f.inf_estimate || compare(r, *f.inf_estimate) < 0) f.inf_estimate = r;
    if (!f.sup_estimate || compare(r, *f.sup_estimate) > 0) f.sup_estimate = r;
  }
}

inline CoverageField compute_field(const Classifier& c, const std::vector<Point>& points, const CoverageOptions& options) {
  const CoverageOptions opt = options.resolved(c);
  CoverageField f;
  f.cap = opt.cap;
  std::vector<Point> todo;
  for (const auto& p : points) {
    if (label_of(c, p).refinement)
      f.skipped.push_back({p, "refinement point"});
    else
      todo.push_back(p);
  }
  f.results = parallel_map(todo.size(), [&](std::size_t i) {
    CoverageOptions o = opt;
    o.seed = point_seed(opt.seed, todo[i]);
    return coverage_at(c, todo[i], o);
  });
  f.points = std::move(todo);
  update_estimates(f);
  return f;
}

inline CoverageField compute_field(const Classifier& c, const std::vector<std::size_t>& grid, const CoverageOptions& options) {
  return compute_field(c, grid_points(c.domain_box(), grid), options);
}

struct ComparisonEntry {
  Point point;
  std::optional<CoverageResult> first;
  std::optional<CoverageResult> second;
  int order = 0;  // compare(first, second) when both are present
  std::string skip_reason;
};

/// Coverage under two classifiers at common points, on the shared coordinate scale.
inline std::vector<ComparisonEntry> compare_at(const Classifier& c1, const Classifier& c2, const std::vector<Point>& points,
                                               const CoverageOptions& options) {
  if (c1.dimension() != c2.dimension()) throw DimensionMismatch(c1.dimension(), c2.dimension());
  const CoverageOptions o1 = options.resolved(c1);
  CoverageOptions o2 = options.resolved(c2);
  o2.cap = o1.cap;
  o2.tol = o1.tol;
  return parallel_map(points.size(), [&](std::size_t i) {
    ComparisonEntry e;
    e.point = points[i];
    const bool r1 = label_of(c1, e.point).refinement;
    const bool r2 = label_of(c2, e.point).refinement;
    if (r1 || r2) {
      e.skip_reason = r1 && r2 ? "refinement point of both classifiers"
                      : r1     ? "refinement point of the first classifier"
                               : "refinement point of the second classifier";
      return e;
    }
    CoverageOptions a = o1, b = o2;
    a.seed = b.seed = point_seed(o1.seed, e.point);
    e.first = coverage_at(c1, e.point, a);
    e.second = coverage_at(c2, e.point, b);
    e.order = compare(*e.first, *e.second);
    return e;
  });
}

inline double radius_or_cap(const CoverageResult& r) {
  switch (r.kind) {
    case CoverageResult::Kind::zero: return 0.0;
    case CoverageResult::Kind::bounded: return r.radius;
    default: return r.cap;
  }
}

inline std::string field_to_csv(const CoverageField& f) {
  std::string out;
  const std::size_t n = f.points.empty() ? 0 : static_cast<std::size_t>(f.points.front().size());
  for (std::size_t i = 0; i < n; ++i) out += "x" + std::to_string(i + 1) + ",";
  out += "coverage_kind,radius_or_cap,method\n";
  for (std::size_t k = 0; k < f.points.size(); ++k) {
    out += format_point_compact(f.points[k]);
    out += ",";
    out += to_string(f.results[k].kind);
    out += "," + format_number(radius_or_cap(f.results[k])) + ",";
    out += to_string(f.results[k].method);
    out += "\n";
  }
  return out;
}

inline Json field_to_json(const CoverageField& f) {
  Json out = Json::object();
  out["cap"] = f.cap;
  Json pts = Json::array();
  for (std::size_t k = 0; k < f.points.size(); ++k) {
    Json item = Json::object();
    item["point"] = point_to_json(f.points[k]);
    item["result"] = result_to_json(f.results[k]);
    pts.push_back(std::move(item));
  }
  out["points"] = std::move(pts);
  out["inf_estimate"] = f.inf_estimate ? result_to_json(*f.inf_estimate) : Json();
  out["sup_estimate"] = f.sup_estimate ? result_to_json(*f.sup_estimate) : Json();
  Json skipped = Json::array();
  for (const auto& s : f.skipped) skipped.push_back(Json::object({{"point", point_to_json(s.point)}, {"reason", s.reason}}));
  out["skipped"] = std::move(skipped);
  return out;
}

inline CoverageField field_from_json(const Json& j) {
  CoverageField f;
  f.cap = detail::require(j, "cap", "").get<double>();
  const Json& pts = detail::require(j, "points", "");
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const std::string path = "points[" + std::to_string(k) + "]";
    f.points.push_back(point_from_json(detail::require(pts[k], "point", path), path + ".point"));
    f.results.push_back(result_from_json(detail::require(pts[k], "result", path), path + ".result"));
  }
  if (const Json& i = detail::require(j, "inf_estimate", ""); !i.is_null()) f.inf_estimate = result_from_json(i, "inf_estimate");
  if (const Json& s = detail::require(j, "sup_estimate", ""); !s.is_null()) f.sup_estimate = result_from_json(s, "sup_estimate");
  const Json& skipped = detail::require(j, "skipped", "");
  for (std::size_t k = 0; k < skipped.size(); ++k) {
    const std::string path = "skipped[" + std::to_string(k) + "]";
    f.skipped.push_back({point_from_json(detail::require(skipped[k], "point", path), path + ".point"),
                         detail::require(skipped[k], "reason", path).get<std::string>()});
  }
  return f;
}

enum class FieldFormat { csv, structured };

inline void export_field(const CoverageField& f, const std::string& path, FieldFormat format) {
  write_file(path, format == FieldFormat::csv ? field_to_csv(f) : field_to_json(f).dump(2) + "\n");
}

inline CoverageField import_field(const std::string& path) { return field_from_json(parse_json_text(read_file(path), path)); }

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_FIELD_HPP
