#ifndef DETVEC_CONSTRUCTIONS_HPP
#define DETVEC_CONSTRUCTIONS_HPP

// Named vector fields, maps and field pairs: the radial field, the linear
// fields of the complex and quaternionic structures, the U(n) and Sp(r)
// pairs, the Hopf twist of R^4 \ {0} and the product-chart fields
// X = xi + V and X1 = V1 + h X on R^k x T^s.

#include "detvec/errors.hpp"
#include "detvec/expr.hpp"
#include "detvec/fields.hpp"
#include "detvec/lie.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace detvec {

/// xi = sum x_j d/dx_j on the Euclidean part of the chart.
inline VFieldExpr radial(const Chart& c) {
  std::vector<Expr> comps(static_cast<std::size_t>(c.dim()), constant(0.0));
  for (int j = 0; j < c.k; ++j) comps[j] = xvar(j);
  return VFieldExpr(c, std::move(comps));
}

inline VFieldExpr radial(int m) {
  if (m < 1) throw PreconditionError("radial: m must be positive");
  return radial(Chart::euclidean(m));
}

/// Y(x) = J x on R^{2n} (or on the Euclidean part of a chart with k = 2n).
inline VFieldExpr complex_structure_field(const Chart& c) {
  if (c.k < 2 || c.k % 2 != 0) throw DimensionError("Jfield needs an even Euclidean dimension");
  return linear_field(complex_structure(c.k / 2), c);
}

inline VFieldExpr complex_structure_field(int n) {
  if (n < 1) throw PreconditionError("complex_structure_field: n must be positive");
  return complex_structure_field(Chart::euclidean(2 * n));
}

/// (Y, Z, U) with Y = Jx, Z = Kx, U = Lx on R^{4r}.
inline std::array<VFieldExpr, 3> quaternionic_fields(const Chart& c) {
  if (c.k < 4 || c.k % 4 != 0) throw DimensionError("quaternionic fields need a Euclidean dimension divisible by 4");
  const auto q = quaternionic_structures(c.k / 4);
  return {linear_field(q[0], c), linear_field(q[1], c), linear_field(q[2], c)};
}

inline std::array<VFieldExpr, 3> quaternionic_fields(int r) {
  if (r < 1) throw PreconditionError("quaternionic_fields: r must be positive");
  return quaternionic_fields(Chart::euclidean(4 * r));
}

struct FieldPair {
  VFieldExpr X;
  VFieldExpr X1;
  GroupSpec intended_group;
  Chart chart;

  std::vector<VFieldExpr> fields() const { return {X, X1}; }
};

/// X = xi, X1 = (|x|^2 - 1) Y on R^{2n}; Aut(X, X1) = U(n).
inline FieldPair un_pair(int n) {
  if (n < 1) throw PreconditionError("un_pair: n must be positive");
  const Chart c = Chart::euclidean(2 * n);
  const Expr f = norm2(c.k) - constant(1.0);
  return {radial(c), scale(f, complex_structure_field(c)), make_group(Family::U, n), c};
}

// ---------------------------------------------------------------------------
// Bump triples
// ---------------------------------------------------------------------------

/// Three functions of t = |x|^2, written as expressions in the single
/// coordinate x1 of Euclidean(1), with phi_a(1) = 0 and phi_a = delta_ab on I_b.
struct BumpTriple {
  std::array<Expr, 3> phi;
  std::array<std::pair<double, double>, 3> intervals;
};

inline BumpTriple default_bumps() {
  const Expr t = xvar(0);
  BumpTriple b;
  // Transitions next to t = 1 are narrow so that phi_1^2 stays representable
  // within 1e-3 of t = 1.
  b.phi[0] = plateau(t, -2.0, -1.0, 0.75, 1.0) + plateau(t, 1.0, 1.25, 9.0, 9.5);
  b.phi[1] = plateau(t, 9.0, 9.5, 25.0, 25.5);
  b.phi[2] = plateau(t, 25.0, 25.5, 1e12, 2e12);
  b.intervals = {{{4.0, 9.0}, {16.0, 25.0}, {36.0, 49.0}}};
  return b;
}

inline double bump_value(const BumpTriple& b, int a, double t) {
  const double p[1] = {t};
  return evaluate_checked(b.phi[static_cast<std::size_t>(a)], p);
}

struct BumpCheck {
  double at_one = 0.0;        // max_a |phi_a(1)|
  double delta = 0.0;         // max |phi_a(t) - delta_ab| over sampled t in I_b
  double min_square_sum = 0.0;  // min phi_1^2 + phi_2^2 + phi_3^2 away from t = 1
};

/// Samples the defining conditions: `per_interval` points in each I_b and a
/// grid over [0, 100] minus (1 - 1e-3, 1 + 1e-3).
inline BumpCheck check_bumps(const BumpTriple& b, int per_interval = 100) {
  BumpCheck out;
  for (int a = 0; a < 3; ++a) out.at_one = std::max(out.at_one, std::abs(bump_value(b, a, 1.0)));
  for (int bi = 0; bi < 3; ++bi) {
    const auto [lo, hi] = b.intervals[bi];
    for (int i = 0; i < per_interval; ++i) {
      const double t = lo + (hi - lo) * (i + 0.5) / per_interval;
      for (int a = 0; a < 3; ++a)
        out.delta = std::max(out.delta, std::abs(bump_value(b, a, t) - (a == bi ? 1.0 : 0.0)));
    }
  }
  out.min_square_sum = INFINITY;
  const int grid = 20001;
  for (int i = 0; i < grid; ++i) {
    const double t = 100.0 * i / (grid - 1);
    if (std::abs(t - 1.0) < 1e-3) continue;
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += std::pow(bump_value(b, a, t), 2);
    out.min_square_sum = std::min(out.min_square_sum, s);
  }
  for (double t : {1.0 - 1e-3, 1.0 + 1e-3}) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += std::pow(bump_value(b, a, t), 2);
    out.min_square_sum = std::min(out.min_square_sum, s);
  }
  return out;
}

inline void validate_bumps(const BumpTriple& b) {
  for (const auto& [lo, hi] : b.intervals)
    if (!(lo < hi)) throw PreconditionError("bump intervals must be non-empty");
  for (const auto& p : b.phi)
    for (int j = 1; j < 16; ++j)
      if (depends_on(p, j)) throw PreconditionError("bump functions take the single variable t");
  const BumpCheck c = check_bumps(b, 25);
  if (c.at_one > 1e-12) throw PreconditionError("bump functions must vanish at t = 1");
  if (c.delta > 1e-12) throw PreconditionError("bump functions must equal delta_ab on I_b");
  if (!(c.min_square_sum > 0.0)) throw PreconditionError("bump functions vanish simultaneously away from t = 1");
}

/// X = xi, X1 = phi_1(|x|^2) Y + phi_2(|x|^2) Z + phi_3(|x|^2) U on R^{4r}.
inline FieldPair sp_pair(int r, const BumpTriple& bumps) {
  if (r < 1) throw PreconditionError("sp_pair: r must be positive");
  validate_bumps(bumps);
  const Chart c = Chart::euclidean(4 * r);
  const auto yzu = quaternionic_fields(c);
  const std::vector<Expr> t_of_x{norm2(c.k)};
  VFieldExpr X1 = scale(substitute(bumps.phi[0], t_of_x), yzu[0]);
  X1 = X1 + scale(substitute(bumps.phi[1], t_of_x), yzu[1]);
  X1 = X1 + scale(substitute(bumps.phi[2], t_of_x), yzu[2]);
  return {radial(c), X1, make_group(Family::Sp, r), c};
}

inline FieldPair sp_pair(int r) { return sp_pair(r, default_bumps()); }

// ---------------------------------------------------------------------------
// Hopf twist
// ---------------------------------------------------------------------------

/// Chart of S^2 = CP^1 given by u = z2 / z1 (written as (u1, u2)), with
/// z1 = x1 + i x2, z2 = x3 + i x4. Undefined on the fiber z1 = 0.
inline std::array<Expr, 2> hopf_chart_coordinates() {
  const Expr x1 = xvar(0), x2 = xvar(1), x3 = xvar(2), x4 = xvar(3);
  const Expr den = pow(x1, 2) + pow(x2, 2);
  return {(x1 * x3 + x2 * x4) / den, (x2 * x3 - x1 * x4) / den};
}

/// Default twist angle: a plateau of |u|^2 in the chart, nonzero near u = 0.
inline Expr default_hopf_mu(double amplitude = 1.0) {
  return amplitude * plateau(norm2(2), -2.0, -1.0, 0.25, 1.0);
}

inline void validate_hopf_mu(const Expr& mu) {
  for (int j = 2; j < 16; ++j)
    if (depends_on(mu, j)) throw PreconditionError("hopf_twist: mu must be a function of (x1, x2) only");
  double outside = 0.0, inside = 0.0;
  for (int ri = 0; ri < 40; ++ri) {
    const double r_out = 10.0 * std::pow(1.2, ri);
    const double r_in = 10.0 * ri / 40.0;
    for (int ai = 0; ai < 36; ++ai) {
      const double a = 2.0 * std::numbers::pi * ai / 36.0;
      const double po[2] = {r_out * std::cos(a), r_out * std::sin(a)};
      const double pi_[2] = {r_in * std::cos(a), r_in * std::sin(a)};
      outside = std::max(outside, std::abs(evaluate(mu, po)));
      inside = std::max(inside, std::abs(evaluate(mu, pi_)));
    }
  }
  if (!(outside == 0.0)) throw PreconditionError("hopf_twist: mu is not compactly supported in the chart (|u| >= 10)");
  if (!(inside > 0.0)) throw PreconditionError("hopf_twist: mu vanishes identically on the sampled chart");
}

/// lambda(x) = cos(m) x + sin(m) J x with m = mu(u(x)); a diffeomorphism of
/// R^4 \ {0} acting by a phase on each Hopf fiber.
inline MapExpr hopf_twist(const Expr& mu) {
  validate_hopf_mu(mu);
  const auto u = hopf_chart_coordinates();
  const Expr m = substitute(mu, {u[0], u[1]});
  const Expr c = cos(m), s = sin(m);
  std::vector<Expr> comps;
  for (int b = 0; b < 2; ++b) {
    const Expr xa = xvar(2 * b), xb = xvar(2 * b + 1);
    comps.push_back(c * xa - s * xb);
    comps.push_back(c * xb + s * xa);
  }
  return MapExpr::make_nonlinear(Chart::euclidean(4, true), std::move(comps));
}

inline MapExpr hopf_twist() { return hopf_twist(default_hopf_mu()); }

// ---------------------------------------------------------------------------
// Product charts R^k x T^s
// ---------------------------------------------------------------------------

/// X = xi + V with V a constant vertical vector.
inline VFieldExpr product_field(int k, int s, const VectorXd& V) {
  if (k < 1 || s < 1) throw PreconditionError("product_field: k and s must be positive");
  if (V.size() != s) throw DimensionError("product_field: V must have s entries");
  const Chart c = Chart::product(k, s);
  std::vector<Expr> comps;
  for (int j = 0; j < k; ++j) comps.push_back(xvar(j));
  for (int r = 0; r < s; ++r) comps.push_back(constant(V(r)));
  return VFieldExpr(c, std::move(comps));
}

/// Constant vertical field (0, V1).
inline VFieldExpr vertical_field(int k, int s, const VectorXd& V1) {
  if (V1.size() != s) throw DimensionError("vertical_field: V1 must have s entries");
  std::vector<Expr> comps(static_cast<std::size_t>(k), constant(0.0));
  for (int r = 0; r < s; ++r) comps.push_back(constant(V1(r)));
  return VFieldExpr(Chart::product(k, s), std::move(comps));
}

struct JetCheck {
  bool fourth_jet_zero = false;
  bool fifth_jet_nonzero = false;
  bool ok() const { return fourth_jet_zero && fifth_jet_nonzero; }
};

/// Difference-quotient test of j^4_0 h = 0 and j^5_0 h != 0 on the first k
/// coordinates: q(t) = h(t d) / t^5 must stay bounded as t shrinks along
/// every probe direction d and settle at a nonzero value along some d.
inline JetCheck check_jet5(const Expr& h, int k, int total_dim) {
  std::vector<VectorXd> dirs;
  for (int j = 0; j < k; ++j) dirs.push_back(VectorXd::Unit(k, j));
  Rng rng = make_rng(0x5e7, static_cast<std::uint64_t>(k));
  std::normal_distribution<double> g;
  for (int t = 0; t < 4; ++t) {
    VectorXd d(k);
    for (auto& v : d) v = g(rng);
    dirs.push_back(d.normalized());
  }
  JetCheck out{true, false};
  for (const auto& d : dirs) {
    double q[2];
    const double ts[2] = {1e-2, 1e-3};
    for (int i = 0; i < 2; ++i) {
      std::vector<double> p(static_cast<std::size_t>(total_dim), 0.0);
      for (int j = 0; j < k; ++j) p[j] = ts[i] * d(j);
      q[i] = std::abs(evaluate_checked(h, p)) / std::pow(ts[i], 5);
    }
    if (q[1] > 2.0 * q[0] + 1e-6) out.fourth_jet_zero = false;
    if (q[1] > 1e-6 && std::abs(q[1] - q[0]) <= 0.5 * q[1]) out.fifth_jet_nonzero = true;
  }
  return out;
}

/// X1 = V1 + (h o pi_1) X on R^k x T^s. h must have j^4_0 h = 0 and
/// j^5_0 h != 0; the structurally zero h is accepted and gives X1 = V1.
inline VFieldExpr product_field_X1(int k, int s, const VFieldExpr& V1, const Expr& h, const VFieldExpr& X) {
  const Chart c = Chart::product(k, s);
  if (!(V1.chart == c) || !(X.chart == c)) throw DimensionError("product_field_X1: chart mismatch");
  for (int j = 0; j < k; ++j)
    if (!V1.components[j].is_zero()) throw PreconditionError("product_field_X1: V1 is not vertical");
  for (int r = 0; r < s; ++r)
    for (int q = 0; q < s; ++q)
      if (depends_on(V1.components[k + r], k + q))
        throw PreconditionError("product_field_X1: V1 must not depend on the angles");
  for (int q = 0; q < s; ++q)
    if (depends_on(h, k + q)) throw PreconditionError("product_field_X1: h must depend on x only");
  if (h.is_zero()) return V1;
  if (!check_jet5(h, k, c.dim()).ok()) throw PreconditionError("product_field_X1: h fails the jet condition j4 = 0, j5 != 0");
  return V1 + scale(h, X);
}

inline VFieldExpr product_field_X1(int k, int s, const VectorXd& V1, const Expr& h, const VectorXd& V) {
  return product_field_X1(k, s, vertical_field(k, s, V1), h, product_field(k, s, V));
}

}  // namespace detvec

#endif  // DETVEC_CONSTRUCTIONS_HPP
