#ifndef COVERAGE_LAB_EXPR_HPP
#define COVERAGE_LAB_EXPR_HPP

// Analytic region predicates.
//
// Grammar (lowest to highest precedence):
//
//   expr    := or_expr
//   or_expr := and_expr { "or" and_expr }
//   and_expr:= not_expr { "and" not_expr }
//   not_expr:= "not" not_expr | cmp
//   cmp     := sum [ ("<" | "<=" | ">" | ">=" | "==") sum ]
//   sum     := product { ("+" | "-") product }
//   product := unary { ("*" | "/") unary }
//   unary   := "-" unary | atom
//   atom    := number | "x" index | "true" | "false"
//            | ("sin" | "cos" | "exp" | "abs") "(" expr ")" | "(" expr ")"
//
// Variables are 1-based (x1..xn). Trigonometric functions take radians. Arithmetic may not appear above a
// comparison and boolean operators may only combine comparisons, which the parser enforces as a type check.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "coverage_lab/errors.hpp"
#include "coverage_lab/geometry.hpp"

namespace coverage_lab::expr {

enum class Kind {
  literal,
  variable,
  boolean,
  neg,
  add,
  sub,
  mul,
  div,
  sin,
  cos,
  exp,
  abs,
  lt,
  le,
  gt,
  ge,
  eq,
  logical_and,
  logical_or,
  logical_not,
};

enum class Type { number, boolean };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::literal;
  double value = 0.0;     // literal value; literals are finite and nonnegative
  std::size_t index = 0;  // 0-based variable index
  bool truth = false;     // boolean literal
  NodePtr lhs;            // operand of unary nodes
  NodePtr rhs;
};

inline bool is_comparison(Kind k) { return k == Kind::lt || k == Kind::le || k == Kind::gt || k == Kind::ge || k == Kind::eq; }
inline bool is_function(Kind k) { return k == Kind::sin || k == Kind::cos || k == Kind::exp || k == Kind::abs; }

inline Type type_of(Kind k) {
  if (is_comparison(k) || k == Kind::boolean || k == Kind::logical_and || k == Kind::logical_or ||
      k == Kind::logical_not)
    return Type::boolean;
  return Type::number;
}

inline NodePtr literal(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::literal;
  n->value = v;
  return n;
}
inline NodePtr variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->index = index;
  return n;
}
inline NodePtr boolean(bool t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::boolean;
  n->truth = t;
  return n;
}
inline NodePtr unary(Kind k, NodePtr operand) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(operand);
  return n;
}
inline NodePtr binary(Kind k, NodePtr l, NodePtr r) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

inline bool structurally_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::literal:
      return a->value == b->value;
    case Kind::variable:
      return a->index == b->index;
    case Kind::boolean:
      return a->truth == b->truth;
    default:
      return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
}

/// A parsed, type-checked expression over R^dimension.
class Expr {
 public:
  Expr() = default;
  Expr(NodePtr root, std::size_t dimension) : root_(std::move(root)), dimension_(dimension) {}

  const NodePtr& root() const { return root_; }
  std::size_t dimension() const { return dimension_; }
  Type type() const { return type_of(root_->kind); }

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.dimension_ == b.dimension_ && structurally_equal(a.root_, b.root_);
  }

 private:
  NodePtr root_;
  std::size_t dimension_ = 0;
};

namespace detail {

enum class Tok { number, ident, lparen, rparen, plus, minus, star, slash, lt, le, gt, ge, eq, comma, end };

struct Token {
  Tok tok;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

inline std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      while (i < s.size() && is_digit(s[i])) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && is_digit(s[j])) {
          i = j;
          while (i < s.size() && is_digit(s[i])) ++i;
        }
      }
      Token t{Tok::number, start, s.substr(start, i - start)};
      // from_chars rejects a leading '.', so parse "0" + text in that case
      std::string buf = (s[start] == '.') ? "0" + std::string(t.text) : std::string(t.text);
      auto [p, ec] = std::from_chars(buf.data(), buf.data() + buf.size(), t.number);
      if (ec != std::errc() || p != buf.data() + buf.size() || !std::isfinite(t.number))
        throw SyntaxError("malformed number '" + std::string(t.text) + "'", start);
      out.push_back(t);
      continue;
    }
    if (is_alpha(c)) {
      while (i < s.size() && (is_alpha(s[i]) || is_digit(s[i]))) ++i;
      out.push_back({Tok::ident, start, s.substr(start, i - start)});
      continue;
    }
    auto two = [&](char next) { return i + 1 < s.size() && s[i + 1] == next; };
    switch (c) {
      case '(': out.push_back({Tok::lparen, start, s.substr(i, 1)}); ++i; break;
      case ')': out.push_back({Tok::rparen, start, s.substr(i, 1)}); ++i; break;
      case '+': out.push_back({Tok::plus, start, s.substr(i, 1)}); ++i; break;
      case '-': out.push_back({Tok::minus, start, s.substr(i, 1)}); ++i; break;
      case '*': out.push_back({Tok::star, start, s.substr(i, 1)}); ++i; break;
      case '/': out.push_back({Tok::slash, start, s.substr(i, 1)}); ++i; break;
      case ',': out.push_back({Tok::comma, start, s.substr(i, 1)}); ++i; break;
      case '<':
        if (two('=')) { out.push_back({Tok::le, start, s.substr(i, 2)}); i += 2; }
        else { out.push_back({Tok::lt, start, s.substr(i, 1)}); ++i; }
        break;
      case '>':
        if (two('=')) { out.push_back({Tok::ge, start, s.substr(i, 2)}); i += 2; }
        else { out.push_back({Tok::gt, start, s.substr(i, 1)}); ++i; }
        break;
      case '=':
        if (two('=')) { out.push_back({Tok::eq, start, s.substr(i, 2)}); i += 2; break; }
        throw SyntaxError("expected '=='", start);
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::end, s.size(), {}});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t dimension) : toks_(lex(text)), dim_(dimension) {}

  NodePtr parse() {
    auto [node, type] = parse_or();
    (void)type;
    if (peek().tok != Tok::end) throw SyntaxError("unexpected trailing input '" + std::string(peek().text) + "'", peek().offset);
    return node;
  }

 private:
  struct Typed {
    NodePtr node;
    Type type;
  };

  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }
  bool keyword(std::string_view kw) const { return peek().tok == Tok::ident && peek().text == kw; }

  static void expect_type(const Typed& t, Type want, std::size_t offset, const char* context) {
    if (t.type != want)
      throw TypeError(std::string(context) + " at byte " + std::to_string(offset) + " expects a " +
                      (want == Type::boolean ? "boolean" : "numeric") + " operand");
  }

  Typed parse_or() {
    const std::size_t off = peek().offset;
    Typed l = parse_and();
    while (keyword("or")) {
      const std::size_t op_off = advance().offset;
      Typed r = parse_and();
      expect_type(l, Type::boolean, off, "'or'");
      expect_type(r, Type::boolean, op_off, "'or'");
      l = {binary(Kind::logical_or, l.node, r.node), Type::boolean};
    }
    return l;
  }

  Typed parse_and() {
    const std::size_t off = peek().offset;
    Typed l = parse_not();
    while (keyword("and")) {
      const std::size_t op_off = advance().offset;
      Typed r = parse_not();
      expect_type(l, Type::boolean, off, "'and'");
      expect_type(r, Type::boolean, op_off, "'and'");
      l = {binary(Kind::logical_and, l.node, r.node), Type::boolean};
    }
    return l;
  }

  Typed parse_not() {
    if (keyword("not")) {
      const std::size_t off = advance().offset;
      Typed operand = parse_not();
      expect_type(operand, Type::boolean, off, "'not'");
      return {unary(Kind::logical_not, operand.node), Type::boolean};
    }
    return parse_cmp();
  }

  Typed parse_cmp() {
    const std::size_t off = peek().offset;
    Typed l = parse_sum();
    Kind k;
    switch (peek().tok) {
      case Tok::lt: k = Kind::lt; break;
      case Tok::le: k = Kind::le; break;
      case Tok::gt: k = Kind::gt; break;
      case Tok::ge: k = Kind::ge; break;
      case Tok::eq: k = Kind::eq; break;
      default: return l;
    }
    const std::size_t op_off = advance().offset;
    Typed r = parse_sum();
    expect_type(l, Type::number, off, "comparison");
    expect_type(r, Type::number, op_off, "comparison");
    switch (peek().tok) {
      case Tok::lt: case Tok::le: case Tok::gt: case Tok::ge: case Tok::eq:
        throw SyntaxError("comparisons do not chain", peek().offset);
      default: break;
    }
    return {binary(k, l.node, r.node), Type::boolean};
  }

  Typed parse_sum() {
    const std::size_t off = peek().offset;
    Typed l = parse_product();
    while (peek().tok == Tok::plus || peek().tok == Tok::minus) {
      const Kind k = advance().tok == Tok::plus ? Kind::add : Kind::sub;
      const std::size_t r_off = peek().offset;
      Typed r = parse_product();
      expect_type(l, Type::number, off, "arithmetic");
      expect_type(r, Type::number, r_off, "arithmetic");
      l = {binary(k, l.node, r.node), Type::number};
    }
    return l;
  }

  Typed parse_product() {
    const std::size_t off = peek().offset;
    Typed l = parse_unary();
    while (peek().tok == Tok::star || peek().tok == Tok::slash) {
      const Kind k = advance().tok == Tok::star ? Kind::mul : Kind::div;
      const std::size_t r_off = peek().offset;
      Typed r = parse_unary();
      expect_type(l, Type::number, off, "arithmetic");
      expect_type(r, Type::number, r_off, "arithmetic");
      l = {binary(k, l.node, r.node), Type::number};
    }
    return l;
  }

  Typed parse_unary() {
    if (peek().tok == Tok::minus) {
      const std::size_t off = advance().offset;
      Typed operand = parse_unary();
      expect_type(operand, Type::number, off, "unary '-'");
      return {unary(Kind::neg, operand.node), Type::number};
    }
    return parse_atom();
  }

  Typed parse_atom() {
    const Token& t = peek();
    switch (t.tok) {
      case Tok::number:
        advance();
        return {literal(t.number), Type::number};
      case Tok::lparen: {
        advance();
        Typed inner = parse_or();
        if (peek().tok != Tok::rparen) throw SyntaxError("expected ')'", peek().offset);
        advance();
        return inner;
      }
      case Tok::ident:
        return parse_identifier();
      case Tok::end:
        throw SyntaxError("unexpected end of input", t.offset);
      default:
        throw SyntaxError("unexpected token '" + std::string(t.text) + "'", t.offset);
    }
  }

  Typed parse_identifier() {
    const Token t = advance();
    if (t.text == "true" || t.text == "false") return {boolean(t.text == "true"), Type::boolean};
    if (t.text.size() >= 2 && t.text[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < t.text.size(); ++i) digits = digits && t.text[i] >= '0' && t.text[i] <= '9';
      if (digits && t.text[1] != '0') {
        std::size_t idx = 0;
        std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), idx);
        if (idx > dim_) throw DimensionError(std::string(t.text), dim_);
        return {variable(idx - 1), Type::number};
      }
    }
    static constexpr std::array<std::pair<std::string_view, Kind>, 4> fns{
        {{"sin", Kind::sin}, {"cos", Kind::cos}, {"exp", Kind::exp}, {"abs", Kind::abs}}};
    for (const auto& [name, kind] : fns) {
      if (t.text != name) continue;
      if (peek().tok != Tok::lparen) throw SyntaxError("expected '(' after " + std::string(name), peek().offset);
      advance();
      std::vector<Typed> args;
      if (peek().tok != Tok::rparen) {
        args.push_back(parse_or());
        while (peek().tok == Tok::comma) {
          advance();
          args.push_back(parse_or());
        }
      }
      if (peek().tok != Tok::rparen) throw SyntaxError("expected ')'", peek().offset);
      advance();
      if (args.size() != 1) throw ArityError(std::string(name), args.size());
      expect_type(args[0], Type::number, t.offset, std::string(name).c_str());
      return {unary(kind, args[0].node), Type::number};
    }
    throw UnknownIdentifier(std::string(t.text), t.offset);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t dim_;
};

inline int precedence(Kind k) {
  switch (k) {
    case Kind::logical_or: return 1;
    case Kind::logical_and: return 2;
    case Kind::logical_not: return 3;
    case Kind::lt: case Kind::le: case Kind::gt: case Kind::ge: case Kind::eq: return 4;
    case Kind::add: case Kind::sub: return 5;
    case Kind::mul: case Kind::div: return 6;
    case Kind::neg: return 7;
    default: return 8;
  }
}

inline const char* spelling(Kind k) {
  switch (k) {
    case Kind::logical_or: return " or ";
    case Kind::logical_and: return " and ";
    case Kind::lt: return " < ";
    case Kind::le: return " <= ";
    case Kind::gt: return " > ";
    case Kind::ge: return " >= ";
    case Kind::eq: return " == ";
    case Kind::add: return " + ";
    case Kind::sub: return " - ";
    case Kind::mul: return "*";
    case Kind::div: return "/";
    case Kind::sin: return "sin";
    case Kind::cos: return "cos";
    case Kind::exp: return "exp";
    case Kind::abs: return "abs";
    default: return "";
  }
}

inline void print_to(const NodePtr& n, std::string& out);

inline void print_child(const NodePtr& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_to(child, out);
  if (parens) out += ')';
}

inline void print_to(const NodePtr& n, std::string& out) {
  const int p = precedence(n->kind);
  switch (n->kind) {
    case Kind::literal: {
      std::array<char, 64> buf{};
      auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n->value);
      out.append(buf.data(), res.ptr);
      return;
    }
    case Kind::variable:
      out += 'x';
      out += std::to_string(n->index + 1);
      return;
    case Kind::boolean:
      out += n->truth ? "true" : "false";
      return;
    case Kind::neg:
      out += '-';
      print_child(n->lhs, precedence(n->lhs->kind) < p, out);
      return;
    case Kind::logical_not:
      out += "not ";
      print_child(n->lhs, precedence(n->lhs->kind) < p, out);
      return;
    case Kind::sin: case Kind::cos: case Kind::exp: case Kind::abs:
      out += spelling(n->kind);
      out += '(';
      print_to(n->lhs, out);
      out += ')';
      return;
    default:
      // left-associative binary operators; comparisons only ever hold arithmetic children
      print_child(n->lhs, precedence(n->lhs->kind) < p, out);
      out += spelling(n->kind);
      print_child(n->rhs, precedence(n->rhs->kind) <= p, out);
      return;
  }
}

}  // namespace detail

/// Parses and type-checks `text` over R^dimension.
inline Expr parse(std::string_view text, std::size_t dimension) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) throw SyntaxError("empty expression", 0);
  detail::Parser parser(text, dimension);
  return Expr(parser.parse(), dimension);
}

/// Canonical text form; parse(print(e)) is structurally equal to e.
inline std::string print(const Expr& e) {
  std::string out;
  detail::print_to(e.root(), out);
  return out;
}

namespace detail {

inline double eval_number(const Node& n, const Vector& x);

inline bool eval_bool(const Node& n, const Vector& x) {
  switch (n.kind) {
    case Kind::boolean:
      return n.truth;
    case Kind::logical_not:
      return !eval_bool(*n.lhs, x);
    case Kind::logical_and: {
      // both sides are always evaluated
      const bool l = eval_bool(*n.lhs, x);
      const bool r = eval_bool(*n.rhs, x);
      return l && r;
    }
    case Kind::logical_or: {
      const bool l = eval_bool(*n.lhs, x);
      const bool r = eval_bool(*n.rhs, x);
      return l || r;
    }
    default:
      break;
  }
  const double l = eval_number(*n.lhs, x);
  const double r = eval_number(*n.rhs, x);
  if (!std::isfinite(l) || !std::isfinite(r)) throw EvalError("non-finite value in comparison");
  switch (n.kind) {
    case Kind::lt: return l < r;
    case Kind::le: return l <= r;
    case Kind::gt: return l > r;
    case Kind::ge: return l >= r;
    case Kind::eq: return l == r;
    default: throw EvalError("expected a boolean expression");
  }
}

inline double eval_number(const Node& n, const Vector& x) {
  switch (n.kind) {
    case Kind::literal: return n.value;
    case Kind::variable: return x[static_cast<Eigen::Index>(n.index)];
    case Kind::neg: return -eval_number(*n.lhs, x);
    case Kind::add: return eval_number(*n.lhs, x) + eval_number(*n.rhs, x);
    case Kind::sub: return eval_number(*n.lhs, x) - eval_number(*n.rhs, x);
    case Kind::mul: return eval_number(*n.lhs, x) * eval_number(*n.rhs, x);
    case Kind::div: return eval_number(*n.lhs, x) / eval_number(*n.rhs, x);
    case Kind::sin: return std::sin(eval_number(*n.lhs, x));
    case Kind::cos: return std::cos(eval_number(*n.lhs, x));
    case Kind::exp: return std::exp(eval_number(*n.lhs, x));
    case Kind::abs: return std::abs(eval_number(*n.lhs, x));
    default: throw EvalError("expected a numeric expression");
  }
}

}  // namespace detail

/// A boolean-valued expression: the membership test of an analytic region.
class Predicate {
 public:
  Predicate() = default;
  explicit Predicate(Expr e) : expr_(std::move(e)) {
    if (expr_.type() != Type::boolean) throw TypeError("predicate must be a boolean expression");
  }
  static Predicate parse(std::string_view text, std::size_t dimension) {
    return Predicate(expr::parse(text, dimension));
  }

  const Expr& expr() const { return expr_; }
  std::size_t dimension() const { return expr_.dimension(); }

  bool evaluate(const Point& x) const {
    require_same_dim(dimension(), x);
    return detail::eval_bool(*expr_.root(), x);
  }

  friend bool operator==(const Predicate& a, const Predicate& b) { return a.expr_ == b.expr_; }

 private:
  Expr expr_;
};

inline bool evaluate(const Predicate& p, const Point& x) { return p.evaluate(x); }

namespace detail {

inline Kind strict_of(Kind k) {
  switch (k) {
    case Kind::le: return Kind::lt;
    case Kind::ge: return Kind::gt;
    default: return k;
  }
}
inline Kind relaxed_of(Kind k) {
  switch (k) {
    case Kind::lt: return Kind::le;
    case Kind::gt: return Kind::ge;
    default: return k;
  }
}

inline NodePtr interior_node(const NodePtr& n, bool positive) {
  switch (n->kind) {
    case Kind::boolean:
      return n;
    case Kind::logical_not:
      return unary(Kind::logical_not, interior_node(n->lhs, !positive));
    case Kind::logical_and:
    case Kind::logical_or:
      return binary(n->kind, interior_node(n->lhs, positive), interior_node(n->rhs, positive));
    case Kind::eq:
      throw UnsupportedRegion("equality atoms have no interior-style form");
    default:
      return binary(positive ? strict_of(n->kind) : relaxed_of(n->kind), n->lhs, n->rhs);
  }
}

inline void collect_comparisons(const NodePtr& n, std::vector<NodePtr>& out) {
  if (is_comparison(n->kind)) {
    out.push_back(n);
    return;
  }
  if (n->lhs) collect_comparisons(n->lhs, out);
  if (n->rhs) collect_comparisons(n->rhs, out);
}

}  // namespace detail

/// The interior-style version of a sign-condition predicate: non-strict comparisons become strict under
/// positive polarity and strict ones become non-strict under a negation.
inline Predicate interior_of(const Predicate& p) {
  return Predicate(Expr(detail::interior_node(p.expr().root(), true), p.dimension()));
}

/// Comparison atoms of a predicate, left to right.
inline std::vector<NodePtr> comparison_atoms(const Predicate& p) {
  std::vector<NodePtr> out;
  detail::collect_comparisons(p.expr().root(), out);
  return out;
}

}  // namespace coverage_lab::expr

#endif  // COVERAGE_LAB_EXPR_HPP
