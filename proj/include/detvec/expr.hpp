#ifndef DETVEC_EXPR_HPP
#define DETVEC_EXPR_HPP

// Immutable expression trees over chart coordinates with exact partial
// differentiation.
//
// Coordinates are x1..xk (Euclidean part) followed by th1..ths (torus
// angles); a variable stores both its printed name and its global index.
// Smooth primitives:
//   plateau(t; a, b, c, d)  0 for t <= a, 1 on [b, c], 0 for t >= d
//   jet5(x)                 x1^5 * plateau(norm2(x); -2, -1, 0.25, 1)
//   glue(u; k)              exp(-1/u) * u^-k for u > 0, else 0
// plateau and jet5 differentiate through their expansions into glue nodes,
// and d/du glue(u; k) = glue(u; k+2) - k glue(u; k+1), so the primitive set
// is closed under differentiation.

#include "detvec/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <system_error>
#include <vector>

namespace detvec {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Norm2, Plateau, Jet5, Glue };

enum class VarKind { X, Theta };

class Expr;

namespace detail {
struct Node;
}

class Expr {
 public:
  Expr();  // the constant 0
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}

  Op op() const;
  double value() const;           // Const
  int index() const;              // Var: global index; Pow: exponent; Glue: k; Norm2/Jet5: k
  int local_index() const;        // Var: 0-based index within its kind
  VarKind var_kind() const;       // Var
  const std::array<double, 4>& params() const;  // Plateau
  std::size_t arity() const;
  const Expr& arg(std::size_t i) const;

  bool is_const() const { return op() == Op::Const; }
  bool is_zero() const { return is_const() && value() == 0.0; }
  bool is_one() const { return is_const() && value() == 1.0; }
  const detail::Node* get() const { return node_.get(); }

 private:
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  int index = 0;
  int local = 0;
  VarKind kind = VarKind::X;
  std::array<double, 4> params{};
  std::vector<Expr> args;
};

inline Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

}  // namespace detail

inline Expr::Expr() : node_(std::make_shared<const detail::Node>()) {}
inline Op Expr::op() const { return node_->op; }
inline double Expr::value() const { return node_->value; }
inline int Expr::index() const { return node_->index; }
inline int Expr::local_index() const { return node_->local; }
inline VarKind Expr::var_kind() const { return node_->kind; }
inline const std::array<double, 4>& Expr::params() const { return node_->params; }
inline std::size_t Expr::arity() const { return node_->args.size(); }
inline const Expr& Expr::arg(std::size_t i) const { return node_->args.at(i); }

// ---------------------------------------------------------------------------
// Raw constructors: build exactly the requested node (used by the parser so
// that printing and re-parsing reproduce the same tree).
// ---------------------------------------------------------------------------

namespace raw {

inline Expr constant(double v) {
  detail::Node n;
  n.op = Op::Const;
  n.value = v;
  return detail::make(std::move(n));
}

inline Expr var(VarKind kind, int local, int global) {
  detail::Node n;
  n.op = Op::Var;
  n.kind = kind;
  n.local = local;
  n.index = global;
  return detail::make(std::move(n));
}

inline Expr unary(Op op, Expr a, int index = 0) {
  detail::Node n;
  n.op = op;
  n.index = index;
  n.args = {std::move(a)};
  return detail::make(std::move(n));
}

inline Expr binary(Op op, Expr a, Expr b) {
  detail::Node n;
  n.op = op;
  n.args = {std::move(a), std::move(b)};
  return detail::make(std::move(n));
}

inline Expr norm2(int k) {
  detail::Node n;
  n.op = Op::Norm2;
  n.index = k;
  return detail::make(std::move(n));
}

inline Expr jet5(int k) {
  detail::Node n;
  n.op = Op::Jet5;
  n.index = k;
  return detail::make(std::move(n));
}

inline Expr plateau(Expr t, double a, double b, double c, double d) {
  detail::Node n;
  n.op = Op::Plateau;
  n.params = {a, b, c, d};
  n.args = {std::move(t)};
  return detail::make(std::move(n));
}

}  // namespace raw

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

inline bool equal(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Const: return a.value() == b.value() || (std::isnan(a.value()) && std::isnan(b.value()));
    case Op::Var: return a.index() == b.index() && a.var_kind() == b.var_kind() && a.local_index() == b.local_index();
    case Op::Norm2:
    case Op::Jet5: return a.index() == b.index();
    case Op::Plateau:
      if (a.params() != b.params()) return false;
      break;
    case Op::Pow:
    case Op::Glue:
      if (a.index() != b.index()) return false;
      break;
    default: break;
  }
  if (a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!equal(a.arg(i), b.arg(i))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Simplifying constructors: constant folding and 0/1 identities only.
// ---------------------------------------------------------------------------

inline Expr constant(double v) { return raw::constant(v); }

/// Coordinate x_{j+1} (0-based j) of a chart.
inline Expr xvar(int j) { return raw::var(VarKind::X, j, j); }

/// Angle th_{r+1} (0-based r) of a chart whose Euclidean part has k coordinates.
inline Expr thvar(int r, int k) { return raw::var(VarKind::Theta, r, k + r); }

inline Expr operator-(const Expr& a) {
  if (a.is_const()) return constant(-a.value());
  if (a.op() == Op::Neg) return a.arg(0);
  return raw::unary(Op::Neg, a);
}

inline Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_const() && b.is_const()) return constant(a.value() + b.value());
  return raw::binary(Op::Add, a, b);
}

inline Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.is_const() && b.is_const()) return constant(a.value() - b.value());
  if (equal(a, b)) return constant(0.0);
  return raw::binary(Op::Sub, a, b);
}

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return constant(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_const() && b.is_const()) return constant(a.value() * b.value());
  if (a.is_const() && a.value() == -1.0) return -b;
  if (b.is_const() && b.value() == -1.0) return -a;
  return raw::binary(Op::Mul, a, b);
}

inline Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_one()) return a;
  if (a.is_zero() && !b.is_zero()) return constant(0.0);
  if (a.is_const() && b.is_const() && b.value() != 0.0) return constant(a.value() / b.value());
  return raw::binary(Op::Div, a, b);
}

inline Expr operator+(const Expr& a, double b) { return a + constant(b); }
inline Expr operator-(const Expr& a, double b) { return a - constant(b); }
inline Expr operator*(double a, const Expr& b) { return constant(a) * b; }
inline Expr operator*(const Expr& a, double b) { return a * constant(b); }

inline Expr pow(const Expr& a, int n) {
  if (n == 0) return constant(1.0);
  if (n == 1) return a;
  if (a.is_const()) return constant(std::pow(a.value(), n));
  return raw::unary(Op::Pow, a, n);
}

inline Expr sin(const Expr& a) {
  if (a.is_const()) return constant(std::sin(a.value()));
  return raw::unary(Op::Sin, a);
}

inline Expr cos(const Expr& a) {
  if (a.is_const()) return constant(std::cos(a.value()));
  return raw::unary(Op::Cos, a);
}

inline Expr norm2(int k) { return raw::norm2(k); }
inline Expr jet5(int k) { return raw::jet5(k); }
inline Expr plateau(const Expr& t, double a, double b, double c, double d) {
  return raw::plateau(t, a, b, c, d);
}

inline Expr glue(const Expr& u, int k) { return raw::unary(Op::Glue, u, k); }

// ---------------------------------------------------------------------------
// Numeric kernels for the primitives
// ---------------------------------------------------------------------------

inline double glue_value(double u, int k) {
  if (!(u > 0.0)) return 0.0;
  if (std::isinf(u)) return k > 0 ? 0.0 : 1.0;
  return std::exp(-1.0 / u - k * std::log(u));
}

/// Smooth step: 0 for u <= 0, 1 for u >= 1.
inline double smooth_step(double u) {
  const double g0 = glue_value(u, 0);
  const double g1 = glue_value(1.0 - u, 0);
  return g0 / (g0 + g1);
}

inline double plateau_value(double t, const std::array<double, 4>& p) {
  const double up = smooth_step((t - p[0]) / (p[1] - p[0]));
  const double down = smooth_step((p[3] - t) / (p[3] - p[2]));
  return up * down;
}

/// Window used by jet5: 1 on norm2(x) <= 0.25, 0 beyond norm2(x) >= 1.
inline constexpr std::array<double, 4> kJet5Window{-2.0, -1.0, 0.25, 1.0};

// ---------------------------------------------------------------------------
// Expansions used by differentiation
// ---------------------------------------------------------------------------

inline Expr smooth_step_expr(const Expr& u) {
  const Expr g0 = glue(u, 0);
  const Expr g1 = glue(constant(1.0) - u, 0);
  return g0 / (g0 + g1);
}

inline Expr expand_plateau(const Expr& e) {
  const auto& p = e.params();
  const Expr& t = e.arg(0);
  const Expr up = smooth_step_expr((t - p[0]) / constant(p[1] - p[0]));
  const Expr down = smooth_step_expr((constant(p[3]) - t) / constant(p[3] - p[2]));
  return up * down;
}

inline Expr expand_jet5(int k) {
  const auto& w = kJet5Window;
  return pow(xvar(0), 5) * plateau(norm2(k), w[0], w[1], w[2], w[3]);
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

/// Exact partial derivative with respect to global coordinate `i`.
inline Expr differentiate(const Expr& e, int i) {
  switch (e.op()) {
    case Op::Const: return constant(0.0);
    case Op::Var: return constant(e.index() == i ? 1.0 : 0.0);
    case Op::Neg: return -differentiate(e.arg(0), i);
    case Op::Add: return differentiate(e.arg(0), i) + differentiate(e.arg(1), i);
    case Op::Sub: return differentiate(e.arg(0), i) - differentiate(e.arg(1), i);
    case Op::Mul: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      return differentiate(a, i) * b + a * differentiate(b, i);
    }
    case Op::Div: {
      const Expr& a = e.arg(0);
      const Expr& b = e.arg(1);
      const Expr da = differentiate(a, i);
      const Expr db = differentiate(b, i);
      if (db.is_zero()) return da / b;
      return (da * b - a * db) / pow(b, 2);
    }
    case Op::Pow: {
      const Expr& a = e.arg(0);
      const int n = e.index();
      return constant(static_cast<double>(n)) * pow(a, n - 1) * differentiate(a, i);
    }
    case Op::Sin: return cos(e.arg(0)) * differentiate(e.arg(0), i);
    case Op::Cos: return -(sin(e.arg(0)) * differentiate(e.arg(0), i));
    case Op::Norm2: return i < e.index() ? constant(2.0) * xvar(i) : constant(0.0);
    case Op::Plateau: return differentiate(expand_plateau(e), i);
    case Op::Jet5: return differentiate(expand_jet5(e.index()), i);
    case Op::Glue: {
      const Expr& u = e.arg(0);
      const Expr du = differentiate(u, i);
      if (du.is_zero()) return constant(0.0);
      const int k = e.index();
      const Expr outer = k == 0 ? glue(u, 2) : glue(u, k + 2) - constant(static_cast<double>(k)) * glue(u, k + 1);
      return outer * du;
    }
  }
  return constant(0.0);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Evaluates at point p (global coordinates). Non-finite intermediate
/// values propagate; use evaluate_checked to turn them into DomainError.
inline double evaluate(const Expr& e, std::span<const double> p) {
  switch (e.op()) {
    case Op::Const: return e.value();
    case Op::Var: return p[static_cast<std::size_t>(e.index())];
    case Op::Neg: return -evaluate(e.arg(0), p);
    case Op::Add: return evaluate(e.arg(0), p) + evaluate(e.arg(1), p);
    case Op::Sub: return evaluate(e.arg(0), p) - evaluate(e.arg(1), p);
    case Op::Mul: {
      const double a = evaluate(e.arg(0), p);
      if (a == 0.0) {
        const double b = evaluate(e.arg(1), p);
        return std::isfinite(b) ? 0.0 : a * b;
      }
      return a * evaluate(e.arg(1), p);
    }
    case Op::Div: return evaluate(e.arg(0), p) / evaluate(e.arg(1), p);
    case Op::Pow: {
      const double a = evaluate(e.arg(0), p);
      const int n = e.index();
      if (n == 2) return a * a;
      return std::pow(a, n);
    }
    case Op::Sin: return std::sin(evaluate(e.arg(0), p));
    case Op::Cos: return std::cos(evaluate(e.arg(0), p));
    case Op::Norm2: {
      double s = 0.0;
      for (int j = 0; j < e.index(); ++j) s += p[j] * p[j];
      return s;
    }
    case Op::Plateau: return plateau_value(evaluate(e.arg(0), p), e.params());
    case Op::Jet5: {
      double s = 0.0;
      for (int j = 0; j < e.index(); ++j) s += p[j] * p[j];
      const double x = p[0];
      return x * x * x * x * x * plateau_value(s, kJet5Window);
    }
    case Op::Glue: return glue_value(evaluate(e.arg(0), p), e.index());
  }
  return 0.0;
}

inline double evaluate_checked(const Expr& e, std::span<const double> p) {
  const double v = evaluate(e, p);
  if (!std::isfinite(v)) throw DomainError("expression is not finite at the requested point");
  return v;
}

// ---------------------------------------------------------------------------
// Substitution and inspection
// ---------------------------------------------------------------------------

/// Replaces every variable with global index i by repl[i]; named primitives
/// that read coordinates directly (norm2, jet5) are expanded first.
inline Expr substitute(const Expr& e, const std::vector<Expr>& repl) {
  switch (e.op()) {
    case Op::Const: return e;
    case Op::Var: return repl.at(static_cast<std::size_t>(e.index()));
    case Op::Neg: return -substitute(e.arg(0), repl);
    case Op::Add: return substitute(e.arg(0), repl) + substitute(e.arg(1), repl);
    case Op::Sub: return substitute(e.arg(0), repl) - substitute(e.arg(1), repl);
    case Op::Mul: return substitute(e.arg(0), repl) * substitute(e.arg(1), repl);
    case Op::Div: return substitute(e.arg(0), repl) / substitute(e.arg(1), repl);
    case Op::Pow: return pow(substitute(e.arg(0), repl), e.index());
    case Op::Sin: return sin(substitute(e.arg(0), repl));
    case Op::Cos: return cos(substitute(e.arg(0), repl));
    case Op::Norm2: {
      Expr s = constant(0.0);
      for (int j = 0; j < e.index(); ++j) s = s + pow(repl.at(j), 2);
      return s;
    }
    case Op::Plateau: {
      const auto& p = e.params();
      return plateau(substitute(e.arg(0), repl), p[0], p[1], p[2], p[3]);
    }
    case Op::Jet5: return substitute(expand_jet5(e.index()), repl);
    case Op::Glue: return glue(substitute(e.arg(0), repl), e.index());
  }
  return e;
}

inline std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < e.arity(); ++i) n += node_count(e.arg(i));
  return n;
}

/// True when some variable of the given kind occurs in e.
inline bool depends_on(const Expr& e, int global_index) {
  switch (e.op()) {
    case Op::Var: return e.index() == global_index;
    case Op::Norm2:
    case Op::Jet5: return global_index < e.index();
    default: break;
  }
  for (std::size_t i = 0; i < e.arity(); ++i)
    if (depends_on(e.arg(i), global_index)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Printing. Output re-parses to the identical tree.
// ---------------------------------------------------------------------------

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return e.value() < 0 || std::signbit(e.value()) ? 3 : 5;
    default: return 5;
  }
}

inline void print_to(const Expr& e, int min_prec, std::string& out);

inline void print_wrapped(const Expr& e, int min_prec, std::string& out) {
  const bool paren = precedence(e) < min_prec;
  if (paren) out += '(';
  print_to(e, 0, out);
  if (paren) out += ')';
}

inline void print_to(const Expr& e, int /*min_prec*/, std::string& out) {
  switch (e.op()) {
    case Op::Const: out += format_number(e.value()); return;
    case Op::Var:
      out += e.var_kind() == VarKind::X ? "x" : "th";
      out += std::to_string(e.local_index() + 1);
      return;
    case Op::Neg:
      out += '-';
      print_wrapped(e.arg(0), 3, out);
      return;
    case Op::Add:
    case Op::Sub: {
      print_wrapped(e.arg(0), 1, out);
      out += e.op() == Op::Add ? " + " : " - ";
      const int p = precedence(e.arg(1));
      print_wrapped(e.arg(1), p == 3 ? 4 : 2, out);
      return;
    }
    case Op::Mul:
    case Op::Div:
      print_wrapped(e.arg(0), 2, out);
      out += e.op() == Op::Mul ? "*" : "/";
      print_wrapped(e.arg(1), 4, out);
      return;
    case Op::Pow:
      print_wrapped(e.arg(0), 5, out);
      out += '^';
      out += std::to_string(e.index());
      return;
    case Op::Sin:
    case Op::Cos:
      out += e.op() == Op::Sin ? "sin(" : "cos(";
      print_to(e.arg(0), 0, out);
      out += ')';
      return;
    case Op::Norm2: out += "norm2(x)"; return;
    case Op::Jet5: out += "jet5(x)"; return;
    case Op::Plateau: {
      out += "plateau(";
      print_to(e.arg(0), 0, out);
      out += "; ";
      const auto& p = e.params();
      for (int i = 0; i < 4; ++i) {
        if (i) out += ", ";
        out += format_number(p[i]);
      }
      out += ')';
      return;
    }
    case Op::Glue:
      out += "glue(";
      print_to(e.arg(0), 0, out);
      out += "; " + std::to_string(e.index()) + ")";
      return;
  }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_to(e, 0, out);
  return out;
}

}  // namespace detvec

#endif  // DETVEC_EXPR_HPP
