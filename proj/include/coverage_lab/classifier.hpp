#ifndef COVERAGE_LAB_CLASSIFIER_HPP
#define COVERAGE_LAB_CLASSIFIER_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coverage_lab/region.hpp"

namespace coverage_lab {

/// Axis-aligned sampling bounds.
struct Box {
  Vector lo;
  Vector hi;

  std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }
  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Point& p) const { return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all(); }

  static Box cube(std::size_t n, double half_width) {
    return {Vector::Constant(static_cast<Eigen::Index>(n), -half_width),
            Vector::Constant(static_cast<Eigen::Index>(n), half_width)};
  }

  friend bool operator==(const Box& a, const Box& b) { return a.lo == b.lo && a.hi == b.hi; }
};

inline constexpr double kDefaultHalfWidth = 20.0;

struct NamedRegion {
  std::string name;
  LabelRegion region;

  friend bool operator==(const NamedRegion& a, const NamedRegion& b) { return a.name == b.name && a.region == b.region; }
};

/// Named label regions plus an optional refinement set, claimed to partition R^n.
class Classifier {
 public:
  Classifier() = default;
  Classifier(std::size_t dimension, std::vector<NamedRegion> labels, std::optional<LabelRegion> refinement_set = {},
             std::optional<Box> domain_box = {}, std::vector<Point> probe_points = {})
      : dimension_(dimension),
        labels_(std::move(labels)),
        refinement_(std::move(refinement_set)),
        domain_box_(std::move(domain_box)),
        probe_points_(std::move(probe_points)) {
    if (dimension_ == 0) throw Error("classifier dimension must be >= 1");
    if (labels_.empty()) throw Error("classifier needs at least one label");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (region_dim(labels_[i].region) != dimension_) throw DimensionMismatch(dimension_, region_dim(labels_[i].region));
      for (std::size_t j = 0; j < i; ++j)
        if (labels_[j].name == labels_[i].name) throw Error("duplicate label name '" + labels_[i].name + "'");
    }
    if (refinement_ && region_dim(*refinement_) != dimension_) throw DimensionMismatch(dimension_, region_dim(*refinement_));
    if (domain_box_) {
      require_same_dim(dimension_, domain_box_->lo);
      require_same_dim(dimension_, domain_box_->hi);
      if (!(domain_box_->lo.array() < domain_box_->hi.array()).all()) throw Error("domain_box must be nondegenerate");
    }
    for (const auto& p : probe_points_) require_same_dim(dimension_, p);
  }

  std::size_t dimension() const { return dimension_; }
  const std::vector<NamedRegion>& labels() const { return labels_; }
  const std::optional<LabelRegion>& refinement_set() const { return refinement_; }
  const std::optional<Box>& declared_domain_box() const { return domain_box_; }
  const std::vector<Point>& probe_points() const { return probe_points_; }

  /// Declared domain box, or [-20, 20]^n.
  Box domain_box() const { return domain_box_ ? *domain_box_ : Box::cube(dimension_, kDefaultHalfWidth); }
  double diameter() const { return domain_box().diameter(); }

  bool is_ordinary() const { return !refinement_.has_value(); }

  const LabelRegion& region(const std::string& name) const {
    for (const auto& l : labels_)
      if (l.name == name) return l.region;
    throw Error("unknown label '" + name + "'");
  }

  friend bool operator==(const Classifier& a, const Classifier& b) {
    return a.dimension_ == b.dimension_ && a.labels_ == b.labels_ && a.refinement_ == b.refinement_ &&
           a.domain_box_ == b.domain_box_ && a.probe_points_ == b.probe_points_;
  }

 private:
  std::size_t dimension_ = 0;
  std::vector<NamedRegion> labels_;
  std::optional<LabelRegion> refinement_;
  std::optional<Box> domain_box_;
  std::vector<Point> probe_points_;
};

inline const std::string kRefinementName = "<refinement>";

/// P(x): either a label name or the refinement set.
struct LabelLookup {
  bool refinement = false;
  std::string name;  // empty for the refinement set

  friend bool operator==(const LabelLookup& a, const LabelLookup& b) {
    return a.refinement == b.refinement && a.name == b.name;
  }
};

/// Every region claiming x; kRefinementName stands for the refinement set.
inline std::vector<std::string> claimants(const Classifier& c, const Point& x) {
  std::vector<std::string> out;
  for (const auto& l : c.labels())
    if (region_contains(l.region, x)) out.push_back(l.name);
  if (c.refinement_set() && region_contains(*c.refinement_set(), x)) out.push_back(kRefinementName);
  return out;
}

inline std::string format_point(const Point& x) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

inline LabelLookup label_of(const Classifier& c, const Point& x) {
  require_same_dim(c.dimension(), x);
  auto names = claimants(c, x);
  if (names.empty()) throw NoLabel("no region claims " + format_point(x));
  if (names.size() > 1) {
    std::string joined;
    for (const auto& n : names) joined += (joined.empty() ? "" : ", ") + n;
    throw AmbiguousLabel("regions {" + joined + "} all claim " + format_point(x));
  }
  if (names.front() == kRefinementName) return {true, {}};
  return {false, names.front()};
}

struct PartitionViolation {
  Point point;
  std::vector<std::string> claimants;  // empty when no region claims the point
};

struct PartitionReport {
  std::size_t samples = 0;
  std::vector<PartitionViolation> violations;
  bool unfalsified() const { return violations.empty(); }
};

/// Sampled falsification of the partition property: `budget` uniform points in `box` plus the declared
/// probe points must each be claimed by exactly one region. Points on "==" boundaries are hit with
/// probability zero, so measure-zero refinement sets are checked through probe_points.
inline PartitionReport validate_partition(const Classifier& c, std::size_t budget, std::uint64_t seed,
                                          const std::optional<Box>& box = {}) {
  if (budget == 0) throw Error("validation budget must be >= 1");
  const Box b = box ? *box : c.domain_box();
  require_same_dim(c.dimension(), b.lo);
  if (!(b.lo.array() < b.hi.array()).all()) throw Error("sampling box must be nondegenerate");

  PartitionReport report;
  auto check = [&](const Point& p) {
    ++report.samples;
    std::vector<std::string> names;
    try {
      names = claimants(c, p);
    } catch (const EvalError&) {
      names = {"<eval-error>"};
      report.violations.push_back({p, names});
      return;
    }
    if (names.size() != 1) report.violations.push_back({p, std::move(names)});
  };
  for (const auto& p : c.probe_points()) check(p);
  Rng rng(seed);
  for (std::size_t i = 0; i < budget; ++i) check(uniform_in_box(rng, b.lo, b.hi));
  return report;
}

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_CLASSIFIER_HPP
