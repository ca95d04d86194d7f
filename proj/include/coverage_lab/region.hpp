#ifndef COVERAGE_LAB_REGION_HPP
#define COVERAGE_LAB_REGION_HPP

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coverage_lab/expr.hpp"
#include "coverage_lab/geometry.hpp"
#include "coverage_lab/sampling.hpp"

namespace coverage_lab {

struct UnionOfPolytopes {
  std::vector<HPolytope> pieces;

  friend bool operator==(const UnionOfPolytopes& a, const UnionOfPolytopes& b) { return a.pieces == b.pieces; }
};

using expr::Predicate;

/// A subset of R^n: halfspace, H-polytope, finite union of H-polytopes, or analytic predicate.
using LabelRegion = std::variant<Halfspace, HPolytope, UnionOfPolytopes, Predicate>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::size_t region_dim(const LabelRegion& r) {
  return std::visit(overloaded{[](const Halfspace& h) { return h.dim(); }, [](const HPolytope& p) { return p.dim(); },
                               [](const UnionOfPolytopes& u) {
                                 if (u.pieces.empty()) throw Error("union region needs at least one polytope");
                                 return u.pieces.front().dim();
                               },
                               [](const Predicate& p) { return p.dimension(); }},
                    r);
}

inline bool region_contains(const LabelRegion& r, const Point& x) {
  return std::visit(overloaded{[&](const Halfspace& h) { return h.contains(x); },
                               [&](const HPolytope& p) { return p.contains(x); },
                               [&](const UnionOfPolytopes& u) {
                                 for (const auto& p : u.pieces)
                                   if (p.contains(x)) return true;
                                 return false;
                               },
                               [&](const Predicate& p) { return p.evaluate(x); }},
                    r);
}

inline bool is_convex(const LabelRegion& r) {
  return std::holds_alternative<Halfspace>(r) || std::holds_alternative<HPolytope>(r);
}

inline const char* region_kind(const LabelRegion& r) {
  return std::visit(overloaded{[](const Halfspace&) { return "halfspace"; }, [](const HPolytope&) { return "polytope"; },
                               [](const UnionOfPolytopes&) { return "union"; },
                               [](const Predicate&) { return "analytic"; }},
                    r);
}

/// Convex regions as a polytope; throws for unions and analytic regions.
inline HPolytope as_polytope(const LabelRegion& r) {
  if (const auto* h = std::get_if<Halfspace>(&r)) return HPolytope({*h});
  if (const auto* p = std::get_if<HPolytope>(&r)) return *p;
  throw ExactUnsupported(region_kind(r));
}

/// Polyhedral pieces of a region; throws for analytic regions.
inline std::vector<HPolytope> polytope_pieces(const LabelRegion& r) {
  if (const auto* u = std::get_if<UnionOfPolytopes>(&r)) return u->pieces;
  if (std::holds_alternative<Predicate>(r)) throw UnsupportedRegion("analytic region has no polyhedral pieces");
  return {as_polytope(r)};
}

namespace detail {

inline expr::NodePtr halfspace_node(const Halfspace& h) {
  using expr::Kind, expr::NodePtr, expr::variable, expr::literal, expr::binary, expr::unary;
  NodePtr sum;
  for (Eigen::Index i = 0; i < h.normal().size(); ++i) {
    const double c = h.normal()[i];
    if (c == 0.0) continue;
    NodePtr term = std::abs(c) == 1.0 ? variable(static_cast<std::size_t>(i))
                                      : binary(Kind::mul, literal(std::abs(c)), variable(static_cast<std::size_t>(i)));
    if (!sum) {
      sum = c < 0.0 ? unary(Kind::neg, term) : term;
    } else {
      sum = binary(c < 0.0 ? Kind::sub : Kind::add, sum, term);
    }
  }
  NodePtr rhs = h.offset() < 0.0 ? unary(Kind::neg, literal(-h.offset())) : literal(h.offset());
  return binary(h.closed() ? Kind::le : Kind::lt, sum, rhs);
}

inline expr::NodePtr polytope_node(const HPolytope& p) {
  expr::NodePtr out;
  for (const auto& h : p.halfspaces()) {
    auto n = halfspace_node(h);
    out = out ? expr::binary(expr::Kind::logical_and, out, n) : n;
  }
  return out;
}

}  // namespace detail

/// Equivalent analytic predicate for any region.
inline Predicate to_predicate(const LabelRegion& r) {
  const std::size_t n = region_dim(r);
  auto wrap = [n](expr::NodePtr node) { return Predicate(expr::Expr(std::move(node), n)); };
  return std::visit(overloaded{[&](const Halfspace& h) { return wrap(detail::halfspace_node(h)); },
                               [&](const HPolytope& p) { return wrap(detail::polytope_node(p)); },
                               [&](const UnionOfPolytopes& u) {
                                 expr::NodePtr out;
                                 for (const auto& p : u.pieces) {
                                   auto node = detail::polytope_node(p);
                                   out = out ? expr::binary(expr::Kind::logical_or, out, node) : node;
                                 }
                                 return wrap(out);
                               },
                               [&](const Predicate& p) { return p; }},
                    r);
}

/// Outcome of a containment or membership check.
struct Certificate {
  enum class Kind { proven, refuted, unfalsified };
  Kind kind = Kind::unfalsified;
  std::optional<Point> witness;  // set when refuted by a sample
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  static Certificate proven() { return {Kind::proven, std::nullopt, 0, 0}; }
  static Certificate refuted(std::optional<Point> w = std::nullopt) { return {Kind::refuted, std::move(w), 0, 0}; }
  static Certificate unfalsified(std::size_t n, std::uint64_t seed) { return {Kind::unfalsified, std::nullopt, n, seed}; }

  bool accepted() const { return kind != Kind::refuted; }
};

inline const char* to_string(Certificate::Kind k) {
  switch (k) {
    case Certificate::Kind::proven: return "proven";
    case Certificate::Kind::refuted: return "refuted";
    default: return "unfalsified";
  }
}

struct ExactMethod {};
struct SampledMethod {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
};
using ContainmentMethod = std::variant<ExactMethod, SampledMethod>;

/// Exact containment of the open ball B in a polytope. An open ball fits inside an open or closed
/// halfspace iff a.c <= b - r|a|; tangency adds no interior point, so both boundary kinds agree.
inline bool ball_in_polytope(const Ball& b, const HPolytope& p) { return p.inner_radius_at(b.center) >= b.radius; }

/// m-sample falsification of B within a membership test. Even-indexed samples sit just inside the
/// sphere, odd-indexed ones are uniform in the ball.
template <typename Member>
Certificate sample_ball(const Ball& b, Member&& member, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    Point p = (i % 2 == 0) ? near_surface_of_ball(rng, b) : uniform_in_ball(rng, b);
    if (!member(p)) return Certificate::refuted(std::move(p));
  }
  return Certificate::unfalsified(samples, seed);
}

inline Certificate ball_in_region(const Ball& b, const LabelRegion& region, const ContainmentMethod& method) {
  require_same_dim(region_dim(region), b.center);
  if (std::holds_alternative<ExactMethod>(method)) {
    if (!is_convex(region)) throw ExactUnsupported(region_kind(region));
    return ball_in_polytope(b, as_polytope(region)) ? Certificate::proven() : Certificate::refuted();
  }
  const auto& s = std::get<SampledMethod>(method);
  return sample_ball(b, [&](const Point& p) { return region_contains(region, p); }, s.samples, s.seed);
}

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_REGION_HPP
