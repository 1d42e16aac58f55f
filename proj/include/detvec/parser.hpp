#ifndef DETVEC_PARSER_HPP
#define DETVEC_PARSER_HPP

// Recursive-descent parser for the field grammar.
//
//   field   := expr                      (must have vector type)
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | 'pi' | var | call | '(' expr ')' | '[' expr (',' expr)* ']'
//   var     := 'x' integer | 'th' integer
//   call    := 'sin' '(' expr ')' | 'cos' '(' expr ')'
//            | 'norm2' '(' 'x' ')' | 'jet5' '(' 'x' ')'
//            | 'plateau' '(' expr sep expr ',' expr ',' expr ',' expr ')'
//            | 'glue' '(' expr sep integer ')'
//            | 'radial' '(' ')' | 'Jfield' '(' ')' | 'Kfield' '(' ')' | 'Lfield' '(' ')'
//   sep     := ';' | ','
//
// Angles th_i may only appear inside sin/cos. Vectors combine by +, - and by
// scalar multiplication or division.

#include "detvec/constructions.hpp"
#include "detvec/expr.hpp"
#include "detvec/fields.hpp"

#include <cctype>
#include <charconv>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace detvec {

enum class ParseErrorKind { Syntax, Arity, UnknownIdentifier, DimensionMismatch, Type };

inline std::string to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::Syntax: return "syntax error";
    case ParseErrorKind::Arity: return "arity mismatch";
    case ParseErrorKind::UnknownIdentifier: return "unknown identifier";
    case ParseErrorKind::DimensionMismatch: return "dimension mismatch";
    case ParseErrorKind::Type: return "type error";
  }
  return "parse error";
}

class ParseError : public std::invalid_argument {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, const std::string& msg)
      : std::invalid_argument(to_string(kind) + " at offset " + std::to_string(offset) + ": " + msg),
        kind_(kind),
        offset_(offset) {}
  ParseErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
};

namespace detail {

struct Value {
  bool is_vector = false;
  Expr scalar;
  std::vector<Expr> comps;
};

class Parser {
 public:
  Parser(std::string_view text, const Chart& chart) : s_(text), chart_(chart) {}

  Value parse_all() {
    Value v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail(ParseErrorKind::Syntax, "unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  std::string_view s_;
  Chart chart_;
  std::size_t pos_ = 0;
  int trig_depth_ = 0;

  [[noreturn]] void fail(ParseErrorKind k, const std::string& msg) const { throw ParseError(k, pos_, msg); }
  [[noreturn]] void fail_at(ParseErrorKind k, std::size_t at, const std::string& msg) const {
    throw ParseError(k, at, msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size()) fail(ParseErrorKind::Syntax, std::string("expected '") + c + "' but input ended");
    if (s_[pos_] != c) fail(ParseErrorKind::Syntax, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  int integer() {
    skip_ws();
    const std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_) fail(ParseErrorKind::Syntax, pos_ >= s_.size() ? "expected an integer but input ended" : "expected an integer");
    int v = 0;
    const auto r = std::from_chars(s_.data() + b, s_.data() + pos_, v);
    if (r.ec != std::errc()) fail_at(ParseErrorKind::Syntax, b, "integer out of range");
    return v;
  }

  double number() {
    const std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto r = std::from_chars(s_.data() + b, s_.data() + pos_, v);
    if (r.ec != std::errc() || r.ptr != s_.data() + pos_) fail_at(ParseErrorKind::Syntax, b, "malformed number");
    return v;
  }

  Expr need_scalar(const Value& v, std::size_t at, const char* what) const {
    if (v.is_vector) fail_at(ParseErrorKind::Type, at, std::string(what) + " needs a scalar operand");
    return v.scalar;
  }

  static Value scalar(Expr e) { return Value{false, std::move(e), {}}; }
  static Value vec(std::vector<Expr> c) { return Value{true, Expr(), std::move(c)}; }
  Value vfield(const VFieldExpr& f) const { return vec(f.components); }

  Value combine(Op op, const Value& a, const Value& b, std::size_t at) const {
    if (!a.is_vector && !b.is_vector) return scalar(raw::binary(op, a.scalar, b.scalar));
    if (op == Op::Add || op == Op::Sub) {
      if (!(a.is_vector && b.is_vector)) fail_at(ParseErrorKind::Type, at, "cannot add a scalar and a vector");
      if (a.comps.size() != b.comps.size()) fail_at(ParseErrorKind::DimensionMismatch, at, "vector lengths differ");
      std::vector<Expr> c;
      for (std::size_t i = 0; i < a.comps.size(); ++i) c.push_back(raw::binary(op, a.comps[i], b.comps[i]));
      return vec(std::move(c));
    }
    if (op == Op::Mul) {
      if (a.is_vector && b.is_vector) fail_at(ParseErrorKind::Type, at, "cannot multiply two vectors");
      std::vector<Expr> c;
      if (a.is_vector)
        for (const auto& e : a.comps) c.push_back(raw::binary(Op::Mul, e, b.scalar));
      else
        for (const auto& e : b.comps) c.push_back(raw::binary(Op::Mul, a.scalar, e));
      return vec(std::move(c));
    }
    // Div
    if (b.is_vector) fail_at(ParseErrorKind::Type, at, "cannot divide by a vector");
    std::vector<Expr> c;
    for (const auto& e : a.comps) c.push_back(raw::binary(Op::Div, e, b.scalar));
    return vec(std::move(c));
  }

  Value expr() {
    Value v = term();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+')) {
        v = combine(Op::Add, v, term(), at);
      } else if (accept('-')) {
        v = combine(Op::Sub, v, term(), at);
      } else {
        return v;
      }
    }
  }

  Value term() {
    Value v = unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) {
        v = combine(Op::Mul, v, unary(), at);
      } else if (accept('/')) {
        v = combine(Op::Div, v, unary(), at);
      } else {
        return v;
      }
    }
  }

  Value unary() {
    if (accept('-')) {
      Value v = unary();
      if (v.is_vector) {
        for (auto& e : v.comps) e = raw::unary(Op::Neg, e);
        return v;
      }
      if (v.scalar.is_const()) return scalar(raw::constant(-v.scalar.value()));
      return scalar(raw::unary(Op::Neg, v.scalar));
    }
    return power();
  }

  Value power() {
    skip_ws();
    const std::size_t at = pos_;
    Value base = primary();
    if (accept('^')) {
      bool neg = false;
      bool paren = false;
      if (accept('(')) paren = true;
      if (accept('-')) neg = true;
      const int n = integer();
      if (paren) expect(')');
      const Expr b = need_scalar(base, at, "'^'");
      return scalar(raw::unary(Op::Pow, b, neg ? -n : n));
    }
    return base;
  }

  void expect_no_args(const std::string& name) {
    expect('(');
    if (!accept(')')) fail(ParseErrorKind::Arity, name + "() takes no arguments");
  }

  void expect_x_arg(const std::string& name) {
    expect('(');
    skip_ws();
    const std::size_t at = pos_;
    const std::string id = identifier();
    if (id != "x") fail_at(ParseErrorKind::Arity, at, name + " takes the single argument x");
    if (!accept(')')) fail(ParseErrorKind::Arity, name + " takes the single argument x");
  }

  double constant_arg() {
    skip_ws();
    const std::size_t at = pos_;
    const Value v = expr();
    const Expr e = need_scalar(v, at, "a parameter");
    for (int j = 0; j < chart_.dim() + 1; ++j)
      if (depends_on(e, j)) fail_at(ParseErrorKind::Type, at, "parameter must be a constant");
    return evaluate(e, std::span<const double>());
  }

  void separator() {
    if (accept(';') || accept(',')) return;
    skip_ws();
    fail(ParseErrorKind::Arity, pos_ >= s_.size() ? "input ended inside an argument list" : "expected ';' or ','");
  }

  Value one_scalar_arg(const std::string& name) {
    expect('(');
    skip_ws();
    const std::size_t at = pos_;
    const Value v = expr();
    if (accept(',') || accept(';')) fail(ParseErrorKind::Arity, name + " takes one argument");
    expect(')');
    return scalar(need_scalar(v, at, name.c_str()));
  }

  Value primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail(ParseErrorKind::Syntax, "unexpected end of input");
    const char c = s_[pos_];
    const std::size_t at = pos_;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return scalar(raw::constant(number()));
    if (c == '(') {
      ++pos_;
      Value v = expr();
      expect(')');
      return v;
    }
    if (c == '[') {
      ++pos_;
      std::vector<Expr> comps;
      do {
        skip_ws();
        const std::size_t eat = pos_;
        const Value v = expr();
        comps.push_back(need_scalar(v, eat, "a vector entry"));
      } while (accept(','));
      expect(']');
      if (static_cast<int>(comps.size()) != chart_.dim())
        fail_at(ParseErrorKind::DimensionMismatch, at,
                "vector has " + std::to_string(comps.size()) + " entries, chart dimension is " + std::to_string(chart_.dim()));
      return vec(std::move(comps));
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(ParseErrorKind::Syntax, std::string("unexpected '") + c + "'");
    const std::string id = identifier();
    const std::string_view prefix = id.rfind("th", 0) == 0 ? "th" : (id.rfind("x", 0) == 0 ? "x" : "");
    if (!prefix.empty() && id.size() > prefix.size() &&
        id.find_first_not_of("0123456789", prefix.size()) == std::string::npos) {
      int i = 0;
      const auto r = std::from_chars(id.data() + prefix.size(), id.data() + id.size(), i);
      if (r.ec != std::errc()) fail_at(ParseErrorKind::DimensionMismatch, at, "coordinate index out of range");
      if (prefix == "x") {
        if (i < 1 || i > chart_.k) fail_at(ParseErrorKind::DimensionMismatch, at, id + " is not a chart coordinate");
        return scalar(raw::var(VarKind::X, i - 1, i - 1));
      }
      if (i < 1 || i > chart_.s) fail_at(ParseErrorKind::DimensionMismatch, at, id + " is not a chart angle");
      if (trig_depth_ == 0) fail_at(ParseErrorKind::Type, at, "angles may only appear inside sin or cos");
      return scalar(raw::var(VarKind::Theta, i - 1, chart_.k + i - 1));
    }
    if (id == "pi") return scalar(raw::constant(std::numbers::pi));
    if (id == "sin" || id == "cos") {
      ++trig_depth_;
      Value v = one_scalar_arg(id);
      --trig_depth_;
      return scalar(raw::unary(id == "sin" ? Op::Sin : Op::Cos, v.scalar));
    }
    if (id == "norm2") {
      expect_x_arg(id);
      return scalar(raw::norm2(chart_.k));
    }
    if (id == "jet5") {
      expect_x_arg(id);
      if (chart_.k < 1) fail_at(ParseErrorKind::DimensionMismatch, at, "jet5 needs a Euclidean coordinate");
      return scalar(raw::jet5(chart_.k));
    }
    if (id == "plateau") {
      expect('(');
      skip_ws();
      const std::size_t targ = pos_;
      const Value t = expr();
      const Expr te = need_scalar(t, targ, "plateau");
      std::array<double, 4> p{};
      for (int i = 0; i < 4; ++i) {
        if (i == 0)
          separator();
        else if (!accept(','))
          fail(ParseErrorKind::Arity, "plateau takes (t; a, b, c, d)");
        p[i] = constant_arg();
      }
      if (!accept(')')) fail(ParseErrorKind::Arity, "plateau takes (t; a, b, c, d)");
      if (!(p[0] < p[1] && p[1] <= p[2] && p[2] < p[3]))
        fail_at(ParseErrorKind::Type, at, "plateau parameters must satisfy a < b <= c < d");
      return scalar(raw::plateau(te, p[0], p[1], p[2], p[3]));
    }
    if (id == "glue") {
      expect('(');
      skip_ws();
      const std::size_t uat = pos_;
      const Value u = expr();
      separator();
      const int k = integer();
      if (!accept(')')) fail(ParseErrorKind::Arity, "glue takes (u; k)");
      return scalar(raw::unary(Op::Glue, need_scalar(u, uat, "glue"), k));
    }
    try {
      if (id == "radial") {
        expect_no_args(id);
        return vfield(radial(chart_));
      }
      if (id == "Jfield") {
        expect_no_args(id);
        return vfield(complex_structure_field(chart_));
      }
      if (id == "Kfield" || id == "Lfield") {
        expect_no_args(id);
        return vfield(quaternionic_fields(chart_)[id == "Kfield" ? 1 : 2]);
      }
    } catch (const DimensionError& e) {
      fail_at(ParseErrorKind::DimensionMismatch, at, e.what());
    }
    fail_at(ParseErrorKind::UnknownIdentifier, at, "'" + id + "'");
  }
};

}  // namespace detail

inline Expr parse_scalar(std::string_view text, const Chart& chart) {
  const detail::Value v = detail::Parser(text, chart).parse_all();
  if (v.is_vector) throw ParseError(ParseErrorKind::Type, 0, "expected a scalar expression");
  return v.scalar;
}

inline VFieldExpr parse_field(std::string_view text, const Chart& chart) {
  const detail::Value v = detail::Parser(text, chart).parse_all();
  if (!v.is_vector) throw ParseError(ParseErrorKind::Type, 0, "expected a vector field");
  if (static_cast<int>(v.comps.size()) != chart.dim())
    throw ParseError(ParseErrorKind::DimensionMismatch, 0, "field dimension does not match chart");
  return VFieldExpr(chart, v.comps);
}

/// Parses a component list as a Nonlinear map of the chart to itself.
inline MapExpr parse_map(std::string_view text, const Chart& chart) {
  const VFieldExpr f = parse_field(text, chart);
  return MapExpr::make_nonlinear(chart, f.components);
}

}  // namespace detvec

#endif  // DETVEC_PARSER_HPP
