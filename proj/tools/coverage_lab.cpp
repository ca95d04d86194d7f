// coverage_lab command line tool.
//
// Exit codes: 0 ok, 1 verification failure, 2 spec or usage error, 3 query error.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coverage_lab.hpp"

namespace cl = coverage_lab;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kSpecError = 2;
constexpr int kQueryError = 3;

struct SpecFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QueryFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> classifiers;
  std::vector<std::string> points;
  std::string points_file;
  std::string grid;
  double cap = 0.0;
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::string out;
  std::string format;
  std::string suite = "theorems";
  std::string data_dir = COVERAGE_LAB_SPEC_DIR;
};

cl::Classifier load(const std::string& path) {
  try {
    return cl::load_spec(path);
  } catch (const cl::Error& e) {
    throw SpecFailure(path + ": " + e.what());
  }
}

cl::Point parse_point(const std::string& text, std::size_t dim) {
  std::vector<double> xs;
  const char* p = text.data();
  const char* end = p + text.size();
  while (true) {
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || next == p) throw QueryFailure("point '" + text + "': expected comma-separated numbers");
    xs.push_back(v);
    p = next;
    if (p == end) break;
    if (*p != ',') throw QueryFailure("point '" + text + "': unexpected character '" + std::string(1, *p) + "'");
    ++p;
  }
  if (xs.size() != dim)
    throw QueryFailure("point '" + text + "': expected " + std::to_string(dim) + " coordinates, got " + std::to_string(xs.size()));
  cl::Point out(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) out[static_cast<Eigen::Index>(i)] = xs[i];
  if (!out.allFinite()) throw QueryFailure("point '" + text + "': coordinates must be finite");
  return out;
}

std::vector<cl::Point> gather_points(const RunConfig& cfg, std::size_t dim) {
  std::vector<cl::Point> out;
  for (const auto& p : cfg.points) out.push_back(parse_point(p, dim));
  if (!cfg.points_file.empty()) {
    std::string text;
    try {
      text = cl::read_file(cfg.points_file);
    } catch (const cl::IoError& e) {
      throw QueryFailure(e.what());
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      out.push_back(parse_point(line, dim));
    }
  }
  return out;
}

std::vector<std::size_t> parse_grid(const std::string& text, std::size_t dim) {
  std::vector<std::size_t> counts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t x = text.find('x', start);
    const std::string part = text.substr(start, x == std::string::npos ? std::string::npos : x - start);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || v == 0)
      throw QueryFailure("grid '" + text + "': expected positive counts like 20x20");
    counts.push_back(v);
    if (x == std::string::npos) break;
    start = x + 1;
  }
  if (counts.size() != dim)
    throw QueryFailure("grid '" + text + "': expected " + std::to_string(dim) + " counts, got " + std::to_string(counts.size()));
  return counts;
}

cl::CoverageOptions coverage_options(const RunConfig& cfg) {
  cl::CoverageOptions o;
  o.cap = cfg.cap;
  o.budget = cfg.budget;
  o.seed = cfg.seed;
  o.tol = cfg.tol;
  return o;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    cl::write_file(cfg.out, text);
    std::cout << "out: " << cfg.out << "\n";
  }
}

std::string kv_anchor(const std::string& prefix, const cl::Anchor& a) {
  std::string s;
  s += prefix + ".center: " + cl::format_point_compact(a.ball.center) + "\n";
  s += prefix + ".radius: " + cl::format_number(a.ball.radius) + "\n";
  s += prefix + ".certificate: " + (a.certificate.kind == cl::AnchorCertificate::Kind::exact ? "exact" : "sampled") + "\n";
  if (a.certificate.kind == cl::AnchorCertificate::Kind::sampled) {
    s += prefix + ".samples: " + std::to_string(a.certificate.samples) + "\n";
    s += prefix + ".seed: " + std::to_string(a.certificate.seed) + "\n";
  }
  return s;
}

std::string kv_result(const std::string& prefix, const cl::CoverageResult& r) {
  std::string s;
  s += prefix + "kind: " + cl::to_string(r.kind) + "\n";
  if (r.is_bounded()) s += prefix + "radius: " + cl::format_number(r.radius) + "\n";
  s += prefix + "cap: " + cl::format_number(r.cap) + "\n";
  s += prefix + "method: " + cl::to_string(r.method) + "\n";
  if (r.method == cl::CoverageResult::Method::lower_bound) {
    s += prefix + "samples: " + std::to_string(r.samples) + "\n";
    s += prefix + "delta: " + cl::format_number(r.delta) + "\n";
    s += prefix + "seed: " + std::to_string(r.seed) + "\n";
  }
  if (r.witness) s += kv_anchor(prefix + "witness", *r.witness);
  if (!r.witnesses.empty()) {
    s += prefix + "witnesses: " + std::to_string(r.witnesses.size()) + "\n";
    for (std::size_t i = 0; i < r.witnesses.size(); ++i) s += kv_anchor(prefix + "witness" + std::to_string(i + 1), r.witnesses[i]);
  }
  return s;
}

cl::CoverageResult query(const cl::Classifier& c, const cl::Point& x, const cl::CoverageOptions& o) {
  try {
    return cl::coverage_at(c, x, o);
  } catch (const cl::RefinementPoint&) {
    throw QueryFailure(cl::format_point_compact(x) + ": point is in the refinement set; coverage is defined on labeled points only");
  } catch (const cl::QueryError& e) {
    throw QueryFailure(cl::format_point_compact(x) + ": " + e.what());
  } catch (const cl::AmbiguousLabel& e) {
    throw SpecFailure(e.what());
  }
}

int cmd_coverage(const RunConfig& cfg) {
  const cl::Classifier c = load(cfg.classifiers.front());
  const auto points = gather_points(cfg, c.dimension());
  if (points.empty()) throw QueryFailure("coverage needs --point or --points-file");
  const auto o = coverage_options(cfg);
  std::string text;
  cl::Json all = cl::Json::array();
  for (const auto& x : points) {
    const cl::CoverageResult r = query(c, x, o);
    if (cfg.format == "structured") {
      cl::Json item = cl::Json::object();
      item["point"] = cl::point_to_json(x);
      item["label"] = cl::label_of(c, x).name;
      item["result"] = cl::result_to_json(r);
      all.push_back(std::move(item));
    } else {
      text += "point: " + cl::format_point_compact(x) + "\n";
      text += "label: " + cl::label_of(c, x).name + "\n";
      text += kv_result("", r);
    }
  }
  emit(cfg, cfg.format == "structured" ? all.dump(2) + "\n" : text);
  return kOk;
}

int cmd_field(const RunConfig& cfg) {
  const cl::Classifier c = load(cfg.classifiers.front());
  std::vector<cl::Point> points = gather_points(cfg, c.dimension());
  if (!cfg.grid.empty()) {
    auto g = cl::grid_points(c.domain_box(), parse_grid(cfg.grid, c.dimension()));
    points.insert(points.end(), g.begin(), g.end());
  }
  if (points.empty()) throw QueryFailure("field needs --grid, --point or --points-file");
  cl::CoverageField f;
  try {
    f = cl::compute_field(c, points, coverage_options(cfg));
  } catch (const cl::QueryError& e) {
    throw QueryFailure(e.what());
  } catch (const cl::NoLabel& e) {
    throw QueryFailure(e.what());
  }
  const bool structured = cfg.format == "structured";
  if (!cfg.out.empty()) cl::export_field(f, cfg.out, structured ? cl::FieldFormat::structured : cl::FieldFormat::csv);
  std::string text;
  text += "points: " + std::to_string(f.points.size()) + "\n";
  text += "skipped: " + std::to_string(f.skipped.size()) + "\n";
  text += "cap: " + cl::format_number(f.cap) + "\n";
  auto estimate = [&](const std::string& key, const cl::CoverageResult& r) {
    text += key + ".kind: " + cl::to_string(r.kind) + "\n";
    text += key + ".value: " + cl::format_number(cl::radius_or_cap(r)) + "\n";
    text += key + ".method: " + cl::to_string(r.method) + "\n";
  };
  if (f.inf_estimate) estimate("inf_estimate", *f.inf_estimate);
  if (f.sup_estimate) estimate("sup_estimate", *f.sup_estimate);
  if (!cfg.out.empty()) {
    text += "out: " + cfg.out + "\n";
    text += std::string("format: ") + (structured ? "structured" : "csv") + "\n";
    std::cout << text;
  } else {
    std::cout << (structured ? cl::field_to_json(f).dump(2) + "\n" : cl::field_to_csv(f));
  }
  return kOk;
}

int cmd_structure(const RunConfig& cfg) {
  const cl::Classifier c = load(cfg.classifiers.front());
  cl::StructureOptions so;
  so.seed = cfg.seed;
  if (cfg.cap > 0.0) so.cap = cfg.cap;
  if (cfg.tol > 0.0) so.tol = cfg.tol;
  so.budget = std::min<std::size_t>(cfg.budget, so.budget);
  const cl::StructureVerdict v = cl::classify_structure(c, so);
  if (cfg.format == "structured") {
    emit(cfg, cl::verdict_to_json(v).dump(2) + "\n");
    return kOk;
  }
  std::string text;
  text += std::string("verdict: ") + cl::to_string(v.kind) + "\n";
  if (!v.reason.empty()) text += "reason: " + v.reason + "\n";
  text += "probes: " + std::to_string(v.probes) + "\n";
  std::string labels;
  for (const auto& l : v.observed_labels) labels += (labels.empty() ? "" : ",") + l;
  text += "observed_labels: " + labels + "\n";
  text += "cap: " + cl::format_number(v.cap) + "\n";
  if (v.hyperplane) {
    text += "hyperplane.normal: " + cl::format_point_compact(v.hyperplane->normal()) + "\n";
    text += "hyperplane.offset: " + cl::format_number(v.hyperplane->offset()) + "\n";
    text += "fit_residual: " + cl::format_number(v.fit_residual) + "\n";
  }
  if (v.witness) text += "witness.point: " + cl::format_point_compact(*v.witness) + "\n";
  if (v.coverage) text += kv_result("witness.coverage.", *v.coverage);
  emit(cfg, text);
  return kOk;
}

int cmd_refine(const RunConfig& cfg) {
  const cl::Classifier c = load(cfg.classifiers.front());
  const cl::Classifier r = cl::refine_boundary(c);
  const std::string json = cl::classifier_to_json(r).dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << json;
    return kOk;
  }
  cl::write_file(cfg.out, json);
  std::cout << "out: " << cfg.out << "\n";
  std::cout << "labels: " << r.labels().size() << "\n";
  std::cout << "refinement_set: " << (r.refinement_set() ? cl::region_kind(*r.refinement_set()) : "none") << "\n";
  return kOk;
}

int cmd_compare(const RunConfig& cfg) {
  if (cfg.classifiers.size() != 2) throw SpecFailure("compare needs --classifier twice");
  const cl::Classifier a = load(cfg.classifiers[0]);
  const cl::Classifier b = load(cfg.classifiers[1]);
  if (a.dimension() != b.dimension()) throw SpecFailure("classifiers have different dimensions");
  const auto points = gather_points(cfg, a.dimension());
  if (points.empty()) throw QueryFailure("compare needs --point or --points-file");
  std::vector<cl::ComparisonEntry> entries;
  try {
    entries = cl::compare_at(a, b, points, coverage_options(cfg));
  } catch (const cl::QueryError& e) {
    throw QueryFailure(e.what());
  } catch (const cl::NoLabel& e) {
    throw QueryFailure(e.what());
  }
  std::string text;
  for (const auto& e : entries) {
    text += "point: " + cl::format_point_compact(e.point) + "\n";
    if (!e.skip_reason.empty()) {
      text += "skipped: " + e.skip_reason + "\n";
      continue;
    }
    text += std::string("first.kind: ") + cl::to_string(e.first->kind) + "\n";
    text += "first.value: " + cl::format_number(cl::radius_or_cap(*e.first)) + "\n";
    text += std::string("second.kind: ") + cl::to_string(e.second->kind) + "\n";
    text += "second.value: " + cl::format_number(cl::radius_or_cap(*e.second)) + "\n";
    text += std::string("order: ") + (e.order < 0 ? "first_less" : e.order > 0 ? "first_greater" : "equal") + "\n";
  }
  emit(cfg, text);
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.suite != "theorems") throw SpecFailure("unknown suite '" + cfg.suite + "'");
  cl::SuiteConfig sc;
  sc.data_dir = cfg.data_dir;
  sc.seed = cfg.seed;
  std::vector<cl::CriterionResult> results;
  try {
    results = cl::run_theorem_suite(sc);
  } catch (const cl::Error& e) {
    std::cout << "suite: theorems\nerror: " << e.what() << "\noverall: FAIL\n";
    return kVerifyFailed;
  }
  emit(cfg, cl::format_report(results, sc));
  for (const auto& r : results)
    if (!r.pass) return kVerifyFailed;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anchor coverage of classifiers: pointwise coverage, fields, structure verdicts"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool classifier, bool points) {
    if (classifier) sub->add_option("--classifier", cfg.classifiers, "Classifier spec (JSON)")->required();
    if (points) {
      sub->add_option("--point", cfg.points, "Query point, comma-separated");
      sub->add_option("--points-file", cfg.points_file, "File with one point per line");
    }
    sub->add_option("--cap", cfg.cap, "Coverage cap (default 1e6 x domain diameter)");
    sub->add_option("--budget", cfg.budget, "Samples per sampled ball certification");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--tol", cfg.tol, "Radius tolerance (default 1e-6 x domain diameter)");
    sub->add_option("--out", cfg.out, "Output file");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "structured"}));
  };

  auto* coverage = app.add_subcommand("coverage", "Coverage at one or more points");
  add_common(coverage, true, true);
  auto* field = app.add_subcommand("field", "Coverage over a grid or point list");
  add_common(field, true, true);
  field->add_option("--grid", cfg.grid, "Per-axis grid counts over the domain box, e.g. 20x20");
  auto* structure = app.add_subcommand("structure", "Refined-linear structure verdict");
  add_common(structure, true, false);
  auto* refine = app.add_subcommand("refine", "Move label boundaries into the refinement set");
  add_common(refine, true, false);
  auto* compare = app.add_subcommand("compare", "Compare two classifiers at common points");
  add_common(compare, true, true);
  auto* verify = app.add_subcommand("verify", "Run the built-in theorem suite");
  add_common(verify, false, false);
  verify->add_option("--suite", cfg.suite, "Suite name")->check(CLI::IsMember({"theorems"}));
  verify->add_option("--data", cfg.data_dir, "Directory with the fixture specs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kSpecError;
  }

  try {
    if (*coverage) return cmd_coverage(cfg);
    if (*field) return cmd_field(cfg);
    if (*structure) return cmd_structure(cfg);
    if (*refine) return cmd_refine(cfg);
    if (*compare) return cmd_compare(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const QueryFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kQueryError;
  } catch (const SpecFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSpecError;
  } catch (const cl::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSpecError;
  } catch (const cl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSpecError;
  }
  return kSpecError;
}
