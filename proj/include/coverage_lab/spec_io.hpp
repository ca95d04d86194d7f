#ifndef COVERAGE_LAB_SPEC_IO_HPP
#define COVERAGE_LAB_SPEC_IO_HPP

// Classifier spec files (JSON):
//
//   {
//     "dimension": 2,
//     "domain_box": [[-20, -20], [20, 20]],            optional
//     "labels": { "M": <region>, "N": <region> },
//     "refinement_set": <region>,                       optional
//     "probe_points": [[0, 0], [1, 0]]                  optional
//   }
//
//   <region> := {"halfspace": {"a": [...], "b": r, "closed": bool}}
//             | {"polytope": {"halfspaces": [{"a": [...], "b": r, "closed": bool}, ...]}}
//             | {"union": [{"polytope": {...}}, ...]}
//             | {"analytic": "expression"}

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "coverage_lab/classifier.hpp"

namespace coverage_lab {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline Vector vector_from_json(const Json& j, const std::string& path, std::size_t n) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of numbers");
  if (j.size() != n) throw SchemaError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_number()) throw SchemaError(path, "entry " + std::to_string(i) + " is not a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  if (!v.allFinite()) throw SchemaError(path, "entries must be finite");
  return v;
}

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Halfspace halfspace_from_json(const Json& j, const std::string& path, std::size_t n) {
  Vector a = vector_from_json(require(j, "a", path), path + ".a", n);
  const Json& b = require(j, "b", path);
  if (!b.is_number()) throw SchemaError(path + ".b", "expected a number");
  const Json& closed = require(j, "closed", path);
  if (!closed.is_boolean()) throw SchemaError(path + ".closed", "expected true or false");
  try {
    return Halfspace(std::move(a), b.get<double>(), closed.get<bool>() ? Boundary::closed : Boundary::open);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

inline Json halfspace_to_json(const Halfspace& h) {
  Json out = Json::object();
  out["a"] = vector_to_json(h.normal());
  out["b"] = h.offset();
  out["closed"] = h.closed();
  return out;
}

inline HPolytope polytope_from_json(const Json& j, const std::string& path, std::size_t n) {
  const Json& hs = require(j, "halfspaces", path);
  if (!hs.is_array() || hs.empty()) throw SchemaError(path + ".halfspaces", "expected a nonempty array");
  std::vector<Halfspace> out;
  for (std::size_t i = 0; i < hs.size(); ++i)
    out.push_back(halfspace_from_json(hs[i], path + ".halfspaces[" + std::to_string(i) + "]", n));
  return HPolytope(std::move(out));
}

inline Json polytope_to_json(const HPolytope& p) {
  Json hs = Json::array();
  for (const auto& h : p.halfspaces()) hs.push_back(halfspace_to_json(h));
  Json out = Json::object();
  out["halfspaces"] = std::move(hs);
  return out;
}

}  // namespace detail

inline LabelRegion region_from_json(const Json& j, const std::string& path, std::size_t n) {
  if (!j.is_object() || j.size() != 1)
    throw SchemaError(path, "expected exactly one of halfspace, polytope, union, analytic");
  const auto& [key, body] = *j.items().begin();
  const std::string sub = path + "." + key;
  if (key == "halfspace") return detail::halfspace_from_json(body, sub, n);
  if (key == "polytope") return detail::polytope_from_json(body, sub, n);
  if (key == "union") {
    if (!body.is_array() || body.empty()) throw SchemaError(sub, "expected a nonempty array of polytopes");
    UnionOfPolytopes u;
    for (std::size_t i = 0; i < body.size(); ++i) {
      const std::string item = sub + "[" + std::to_string(i) + "]";
      u.pieces.push_back(detail::polytope_from_json(detail::require(body[i], "polytope", item), item + ".polytope", n));
    }
    return u;
  }
  if (key == "analytic") {
    if (!body.is_string()) throw SchemaError(sub, "expected an expression string");
    try {
      return Predicate::parse(body.get<std::string>(), n);
    } catch (const Error& e) {
      throw SchemaError(sub, e.what());
    }
  }
  throw SchemaError(path, "unknown region kind '" + key + "'");
}

inline Json region_to_json(const LabelRegion& r) {
  Json out = Json::object();
  std::visit(overloaded{[&](const Halfspace& h) { out["halfspace"] = detail::halfspace_to_json(h); },
                        [&](const HPolytope& p) { out["polytope"] = detail::polytope_to_json(p); },
                        [&](const UnionOfPolytopes& u) {
                          Json arr = Json::array();
                          for (const auto& p : u.pieces) {
                            Json item = Json::object();
                            item["polytope"] = detail::polytope_to_json(p);
                            arr.push_back(std::move(item));
                          }
                          out["union"] = std::move(arr);
                        },
                        [&](const Predicate& p) { out["analytic"] = expr::print(p.expr()); }},
             r);
  return out;
}

inline Classifier classifier_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("<root>", "expected an object");
  const Json& dim = detail::require(j, "dimension", "");
  if (!dim.is_number_integer() || dim.get<long long>() < 1) throw SchemaError("dimension", "expected a positive integer");
  const auto n = static_cast<std::size_t>(dim.get<long long>());

  std::optional<Box> box;
  if (auto it = j.find("domain_box"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) throw SchemaError("domain_box", "expected [[lo...], [hi...]]");
    box = Box{detail::vector_from_json((*it)[0], "domain_box[0]", n), detail::vector_from_json((*it)[1], "domain_box[1]", n)};
    if (!(box->lo.array() < box->hi.array()).all()) throw SchemaError("domain_box", "lo must be < hi in every coordinate");
  }

  const Json& labels = detail::require(j, "labels", "");
  if (!labels.is_object() || labels.empty()) throw SchemaError("labels", "expected a nonempty object");
  std::vector<NamedRegion> named;
  for (const auto& [name, region] : labels.items()) {
    if (name == kRefinementName) throw SchemaError("labels." + name, "reserved name");
    named.push_back({name, region_from_json(region, "labels." + name, n)});
  }

  std::optional<LabelRegion> refinement;
  if (auto it = j.find("refinement_set"); it != j.end()) refinement = region_from_json(*it, "refinement_set", n);

  std::vector<Point> probes;
  if (auto it = j.find("probe_points"); it != j.end()) {
    if (!it->is_array()) throw SchemaError("probe_points", "expected an array of points");
    for (std::size_t i = 0; i < it->size(); ++i)
      probes.push_back(detail::vector_from_json((*it)[i], "probe_points[" + std::to_string(i) + "]", n));
  }
  try {
    return Classifier(n, std::move(named), std::move(refinement), std::move(box), std::move(probes));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError("labels", e.what());
  }
}

inline Json classifier_to_json(const Classifier& c) {
  Json out = Json::object();
  out["dimension"] = c.dimension();
  if (const auto& box = c.declared_domain_box()) out["domain_box"] = Json::array({detail::vector_to_json(box->lo), detail::vector_to_json(box->hi)});
  Json labels = Json::object();
  for (const auto& l : c.labels()) labels[l.name] = region_to_json(l.region);
  out["labels"] = std::move(labels);
  if (c.refinement_set()) out["refinement_set"] = region_to_json(*c.refinement_set());
  if (!c.probe_points().empty()) {
    Json probes = Json::array();
    for (const auto& p : c.probe_points()) probes.push_back(detail::vector_to_json(p));
    out["probe_points"] = std::move(probes);
  }
  return out;
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline Classifier classifier_from_string(const std::string& text, const std::string& source = "<string>") {
  return classifier_from_json(parse_json_text(text, source));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline Classifier load_spec(const std::string& path) { return classifier_from_string(read_file(path), path); }

inline void save_spec(const Classifier& c, const std::string& path) { write_file(path, classifier_to_json(c).dump(2) + "\n"); }

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_SPEC_IO_HPP
