#ifndef COVERAGE_LAB_REPORT_HPP
#define COVERAGE_LAB_REPORT_HPP

// Structured (JSON) encodings of results, shared by field exports and the command line tool.

#include <charconv>
#include <string>

#include "coverage_lab/spec_io.hpp"
#include "coverage_lab/structure.hpp"

namespace coverage_lab {

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_point_compact(const Point& p) {
  std::string s;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += format_number(p[i]);
  }
  return s;
}

inline Json point_to_json(const Point& p) { return detail::vector_to_json(p); }

inline Point point_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of numbers");
  return detail::vector_from_json(j, path, j.size());
}

inline Json anchor_to_json(const Anchor& a) {
  Json out = Json::object();
  out["center"] = point_to_json(a.ball.center);
  out["radius"] = a.ball.radius;
  out["anchored_point"] = point_to_json(a.anchored_point);
  out["label"] = a.label;
  Json cert = Json::object();
  cert["kind"] = a.certificate.kind == AnchorCertificate::Kind::exact ? "exact" : "sampled";
  cert["samples"] = a.certificate.samples;
  cert["seed"] = a.certificate.seed;
  out["certificate"] = std::move(cert);
  return out;
}

inline Anchor anchor_from_json(const Json& j, const std::string& path) {
  Anchor a{Ball(point_from_json(detail::require(j, "center", path), path + ".center"),
                detail::require(j, "radius", path).get<double>()),
           point_from_json(detail::require(j, "anchored_point", path), path + ".anchored_point"),
           detail::require(j, "label", path).get<std::string>(), AnchorCertificate::exact()};
  const Json& cert = detail::require(j, "certificate", path);
  const std::string kind = detail::require(cert, "kind", path + ".certificate").get<std::string>();
  if (kind != "exact" && kind != "sampled") throw SchemaError(path + ".certificate.kind", "expected exact or sampled");
  a.certificate.kind = kind == "exact" ? AnchorCertificate::Kind::exact : AnchorCertificate::Kind::sampled;
  a.certificate.samples = detail::require(cert, "samples", path + ".certificate").get<std::size_t>();
  a.certificate.seed = detail::require(cert, "seed", path + ".certificate").get<std::uint64_t>();
  return a;
}

inline Json result_to_json(const CoverageResult& r) {
  Json out = Json::object();
  out["kind"] = to_string(r.kind);
  out["method"] = to_string(r.method);
  out["radius"] = r.radius;
  out["cap"] = r.cap;
  if (r.witness) out["witness"] = anchor_to_json(*r.witness);
  Json ws = Json::array();
  for (const auto& w : r.witnesses) ws.push_back(anchor_to_json(w));
  out["witnesses"] = std::move(ws);
  out["samples"] = r.samples;
  out["delta"] = r.delta;
  out["seed"] = r.seed;
  return out;
}

inline CoverageResult result_from_json(const Json& j, const std::string& path) {
  CoverageResult r;
  const std::string kind = detail::require(j, "kind", path).get<std::string>();
  if (kind == "Zero") r.kind = CoverageResult::Kind::zero;
  else if (kind == "Bounded") r.kind = CoverageResult::Kind::bounded;
  else if (kind == "ExceedsCap") r.kind = CoverageResult::Kind::exceeds_cap;
  else throw SchemaError(path + ".kind", "unknown result kind '" + kind + "'");
  const std::string method = detail::require(j, "method", path).get<std::string>();
  if (method != "exact" && method != "lower_bound") throw SchemaError(path + ".method", "expected exact or lower_bound");
  r.method = method == "exact" ? CoverageResult::Method::exact : CoverageResult::Method::lower_bound;
  r.radius = detail::require(j, "radius", path).get<double>();
  r.cap = detail::require(j, "cap", path).get<double>();
  if (auto it = j.find("witness"); it != j.end()) r.witness = anchor_from_json(*it, path + ".witness");
  const Json& ws = detail::require(j, "witnesses", path);
  for (std::size_t i = 0; i < ws.size(); ++i) r.witnesses.push_back(anchor_from_json(ws[i], path + ".witnesses[" + std::to_string(i) + "]"));
  r.samples = detail::require(j, "samples", path).get<std::size_t>();
  r.delta = detail::require(j, "delta", path).get<double>();
  r.seed = detail::require(j, "seed", path).get<std::uint64_t>();
  return r;
}

inline Json hyperplane_to_json(const Hyperplane& h) {
  Json out = Json::object();
  out["normal"] = point_to_json(h.normal());
  out["offset"] = h.offset();
  return out;
}

inline Json verdict_to_json(const StructureVerdict& v) {
  Json out = Json::object();
  out["verdict"] = to_string(v.kind);
  out["reason"] = v.reason;
  out["cap"] = v.cap;
  out["probes"] = v.probes;
  out["observed_labels"] = v.observed_labels;
  if (v.hyperplane) {
    out["hyperplane"] = hyperplane_to_json(*v.hyperplane);
    out["fit_residual"] = v.fit_residual;
  }
  if (v.witness) out["witness_point"] = point_to_json(*v.witness);
  if (v.coverage) out["witness_coverage"] = result_to_json(*v.coverage);
  return out;
}

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_REPORT_HPP
