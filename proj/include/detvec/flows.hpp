#ifndef DETVEC_FLOWS_HPP
#define DETVEC_FLOWS_HPP

// Flows of chart vector fields and the product-chart results: trajectory
// closures on R^k x T^s, the radial straightening map of a vertical drift,
// the truncated solution space of the commutation conditions (a), (b), and
// the fifth-jet rigidity of scalings.

#include "detvec/constructions.hpp"
#include "detvec/errors.hpp"
#include "detvec/expr.hpp"
#include "detvec/fields.hpp"
#include "detvec/lie.hpp"
#include "detvec/relations.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace detvec {

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

struct Trajectory {
  std::vector<double> times;
  std::vector<VectorXd> points;  // angles reduced to [0, 2 pi)
  int steps = 0;
  int rejected = 0;
  double max_error_estimate = 0.0;  // largest accepted normalized local error (<= 1)
};

struct FlowOptions {
  double tol = 1e-10;
  double near_origin_radius = 1.0;  // max step is capped inside this radius
  double near_origin_max_step = 0.1;
  int max_steps = 2000000;
  bool record = false;
};

inline void reduce_angles(const Chart& c, VectorXd& p) {
  const double two_pi = 2.0 * std::numbers::pi;
  for (int r = 0; r < c.s; ++r) {
    double& a = p(c.k + r);
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    if (a >= two_pi) a = 0.0;
  }
}

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DP5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Integrates X from p0 over time t (either sign) with an embedded 5(4)
/// Runge-Kutta pair. Local errors are held below 0.1 tol in the mixed
/// absolute/relative norm; the step is capped near the origin.
inline Trajectory integrate_trajectory(const VFieldExpr& X, const VectorXd& p0, double t, const FlowOptions& opt = {}) {
  if (p0.size() != X.dim()) throw DimensionError("integrate_flow: point dimension does not match chart");
  if (!(opt.tol > 0)) throw PreconditionError("integrate_flow: tol must be positive");
  using D = detail::DP5;
  const double loc = 0.1 * opt.tol;
  const int n = X.dim();
  auto f = [&](const VectorXd& y) { return evaluate(X, y); };
  auto horizontal_norm = [&](const VectorXd& y) { return y.head(X.chart.k).norm(); };

  Trajectory tr;
  VectorXd y = p0;
  double now = 0.0;
  const double dir = t >= 0 ? 1.0 : -1.0;
  const double span = std::abs(t);
  auto push = [&](double time, const VectorXd& v) {
    if (!opt.record) return;
    VectorXd r = v;
    reduce_angles(X.chart, r);
    tr.times.push_back(time);
    tr.points.push_back(r);
  };
  push(0.0, y);
  if (span == 0.0) {
    if (!opt.record) {
      VectorXd r = y;
      reduce_angles(X.chart, r);
      tr.times.push_back(0.0);
      tr.points.push_back(r);
    }
    return tr;
  }

  VectorXd k1 = f(y);
  double h = std::min(span, 0.01 * (1.0 + y.norm()) / std::max(1e-12, k1.norm()));
  h = std::max(h, 1e-6 * span);
  const double h_min = 1e-14 * std::max(1.0, span);
  while (span - now > 0.0) {
    if (tr.steps + tr.rejected > opt.max_steps) throw NumericError("integrate_flow: step budget exhausted");
    double h_max = span - now;
    if (opt.near_origin_radius > 0 && horizontal_norm(y) < opt.near_origin_radius)
      h_max = std::min(h_max, opt.near_origin_max_step);
    h = std::min(h, h_max);
    const double sh = dir * h;
    const VectorXd k2 = f(y + sh * (D::a21 * k1));
    const VectorXd k3 = f(y + sh * (D::a31 * k1 + D::a32 * k2));
    const VectorXd k4 = f(y + sh * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3));
    const VectorXd k5 = f(y + sh * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4));
    const VectorXd k6 = f(y + sh * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 + D::a64 * k4 + D::a65 * k5));
    const VectorXd y5 = y + sh * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 + D::b6 * k6);
    const VectorXd k7 = f(y5);
    const VectorXd e = sh * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 + D::e6 * k6 + D::e7 * k7);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sc = loc + loc * std::max(std::abs(y(i)), std::abs(y5(i)));
      err = std::max(err, std::abs(e(i)) / sc);
    }
    if (!std::isfinite(err)) throw NumericError("integrate_flow: non-finite step");
    if (err <= 1.0) {
      now = (h >= span - now) ? span : now + h;
      y = y5;
      k1 = k7;
      ++tr.steps;
      tr.max_error_estimate = std::max(tr.max_error_estimate, err);
      push(dir * now, y);
      const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
      h *= grow;
    } else {
      ++tr.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < h_min) throw NumericError("integrate_flow: step size underflow");
    }
  }
  if (!opt.record) {
    VectorXd r = y;
    reduce_angles(X.chart, r);
    tr.times.push_back(t);
    tr.points.push_back(r);
  }
  return tr;
}

/// Phi_t(p0), angles reduced to [0, 2 pi).
inline VectorXd integrate_flow(const VFieldExpr& X, const VectorXd& p0, double t, double tol = 1e-10) {
  FlowOptions o;
  o.tol = tol;
  return integrate_trajectory(X, p0, t, o).points.back();
}

/// Header "t,x1,..,xk,th1,..,ths" then one row per recorded point.
inline std::string trajectory_csv(const Trajectory& tr, const Chart& c) {
  std::string out = "t";
  for (int j = 0; j < c.k; ++j) out += ",x" + std::to_string(j + 1);
  for (int r = 0; r < c.s; ++r) out += ",th" + std::to_string(r + 1);
  out += '\n';
  for (std::size_t i = 0; i < tr.points.size(); ++i) {
    out += format_number(tr.times[i]);
    for (Eigen::Index j = 0; j < tr.points[i].size(); ++j) out += "," + format_number(tr.points[i](j));
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trajectory closures for X = xi + V
// ---------------------------------------------------------------------------

struct ClosureClass {
  enum class Kind { FixedPoint, TorusClosure, Unbounded };
  Kind kind = Kind::Unbounded;
  int dim = 0;  // torus dimension for TorusClosure
  std::string diagnostics;
};

inline std::string to_string(ClosureClass::Kind k) {
  switch (k) {
    case ClosureClass::Kind::FixedPoint: return "FixedPoint";
    case ClosureClass::Kind::TorusClosure: return "TorusClosure";
    case ClosureClass::Kind::Unbounded: return "Unbounded";
  }
  return "?";
}

/// For X = xi + V: the trajectory of (x, th) is (e^t x, th + t V). It has
/// compact closure iff x = 0, and then the closure is a torus whose
/// dimension is the rank over Q of the entries of V.
inline ClosureClass trajectory_closure_class(const VectorXd& V, const VectorXd& p0, int k) {
  const int s = static_cast<int>(V.size());
  if (p0.size() != k + s) throw DimensionError("trajectory_closure_class: point dimension mismatch");
  ClosureClass out;
  if (p0.head(k).norm() != 0.0) {
    out.kind = ClosureClass::Kind::Unbounded;
    out.diagnostics = "x-component nonzero: |x(t)| = e^t |x0|";
    return out;
  }
  const int rank = rational_rank(V);
  if (rank == 0) {
    out.kind = ClosureClass::Kind::FixedPoint;
    out.diagnostics = "V = 0";
    return out;
  }
  out.kind = ClosureClass::Kind::TorusClosure;
  out.dim = rank;
  out.diagnostics = "rank over Q of V = " + std::to_string(rank);
  return out;
}

/// Same, reading V off a field built by product_field.
inline ClosureClass trajectory_closure_class(const VFieldExpr& X, const VectorXd& p0) {
  const Chart& c = X.chart;
  VectorXd V(c.s);
  for (int j = 0; j < c.k; ++j)
    if (!equal(X.components[j], xvar(j))) throw PreconditionError("trajectory_closure_class: X is not xi + V");
  for (int r = 0; r < c.s; ++r) {
    if (!X.components[c.k + r].is_const()) throw PreconditionError("trajectory_closure_class: V must be constant");
    V(r) = X.components[c.k + r].value();
  }
  return trajectory_closure_class(V, p0, c.k);
}

// ---------------------------------------------------------------------------
// Radial straightening of xi + W on R^k x T^s
// ---------------------------------------------------------------------------

struct Straightening {
  Chart chart;
  VFieldExpr W;        // vertical drift, angle-independent
  VFieldExpr W_tilde;  // chi W
  Expr chi;            // 1 on |x| <= c, 0 on |x| >= b (zero in the W' = 0 mode)
  double a = 0, b = 0, c = 0;
  double quad_tol = 1e-12;

  /// sigma(x) = int_a^{|x|} (1 - chi(rho xhat)) W(rho xhat) d rho / rho.
  VectorXd sigma(const VectorXd& x) const {
    const int k = chart.k, s = chart.s;
    VectorXd out = VectorXd::Zero(s);
    const double r = x.norm();
    if (r <= a) return out;
    const VectorXd xhat = x / r;
    // On [a, c] the integrand vanishes when chi is a genuine cutoff.
    const double lo = chi.is_zero() ? a : std::min(c, r);
    for (int q = 0; q < s; ++q) {
      auto integrand = [&](double rho) {
        std::vector<double> p(static_cast<std::size_t>(k + s), 0.0);
        for (int j = 0; j < k; ++j) p[j] = rho * xhat(j);
        const double w = evaluate_checked(W.components[k + q], p);
        const double ch = evaluate_checked(chi, p);
        return (1.0 - ch) * w / rho;
      };
      // Panels of width <= 0.25 with shallow adaptive refinement; the error
      // check is absolute since the integrand is flat near the cutoff.
      if (r > lo) {
        const int panels = std::max(1, static_cast<int>(std::ceil((r - lo) / 0.25)));
        double acc = 0.0, err_sum = 0.0;
        for (int i = 0; i < panels; ++i) {
          const double x0 = lo + (r - lo) * i / panels, x1 = lo + (r - lo) * (i + 1) / panels;
          double err = 0.0;
          acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, x0, x1, 8, quad_tol, &err);
          err_sum += err;
        }
        if (!std::isfinite(acc) || err_sum > 1e-10 * (1.0 + std::abs(acc)))
          throw NumericError("straighten: quadrature failed to converge");
        out(q) = acc;
      }
      if (!chi.is_zero() && r > a && r <= c) out(q) = 0.0;
    }
    return out;
  }

  /// F(x, th) = (x, th - sigma(x)); angles are not reduced.
  VectorXd map(const VectorXd& p) const {
    VectorXd out = p;
    out.tail(chart.s) -= sigma(p.head(chart.k));
    return out;
  }
};

/// Builds F with F_*(xi + W) = xi + W_tilde, W_tilde = chi W supported in
/// |x| < b and F = id on |x| <= a. With `drop_cutoff`, W must vanish on
/// |x| < b and W_tilde = 0.
inline Straightening straighten_lemma37(const VFieldExpr& W, double a, double b, bool drop_cutoff = false) {
  if (!(0.0 < a && a < b)) throw PreconditionError("straighten: need 0 < a < b");
  const Chart& ch = W.chart;
  if (ch.kind != Chart::Kind::ProductRT || ch.k < 1 || ch.s < 1) throw DimensionError("straighten: W must live on R^k x T^s");
  for (int j = 0; j < ch.k; ++j)
    if (!W.components[j].is_zero()) throw PreconditionError("straighten: W must be vertical");
  for (int r = 0; r < ch.s; ++r)
    for (int q = 0; q < ch.s; ++q)
      if (depends_on(W.components[ch.k + r], ch.k + q))
        throw PreconditionError("straighten: W must be left-invariant (independent of the angles)");
  Straightening st;
  st.chart = ch;
  st.W = W;
  st.a = a;
  st.b = b;
  st.c = 0.5 * (a + b);
  if (drop_cutoff) {
    Rng rng = make_rng(0x38, 0);
    std::normal_distribution<double> g;
    for (int t = 0; t < 200; ++t) {
      VectorXd p = VectorXd::Zero(ch.dim());
      VectorXd x(ch.k);
      for (auto& v : x) v = g(rng);
      p.head(ch.k) = x.normalized() * b * std::pow((t + 0.5) / 200.0, 1.0 / ch.k);
      if (evaluate(W, p).norm() != 0.0) throw PreconditionError("straighten: W does not vanish on the ball of radius b");
    }
    st.chi = constant(0.0);
  } else {
    st.chi = plateau(norm2(ch.k), -2.0, -1.0, st.c * st.c, b * b);
  }
  st.W_tilde = scale(st.chi, W);
  return st;
}

struct StraighteningReport {
  double identity_defect = 0.0;   // max |F(p) - p| over |x| <= a
  double residual = 0.0;          // max |DF(p) Y(p) - (xi + W_tilde)(F(p))|
  double tail = 0.0;              // max |W_tilde| over |x| >= b
  double bundle_defect = 0.0;     // max |F(x, th + d) - F(x, th) - (0, d)|
  int points = 0;
};

/// Samples the straightening contract. DF(p) Y(p) is taken by a fourth-order
/// central difference of F along the flow direction Y(p).
inline StraighteningReport check_straightening(const Straightening& st, std::uint64_t seed, int count = 200,
                                               double radius = 0.0) {
  const Chart& ch = st.chart;
  if (radius <= 0) radius = 2.0 * st.b;
  Rng rng = make_rng(seed, 0x37);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const VFieldExpr Y = radial(ch) + st.W;
  const VFieldExpr target = radial(ch) + st.W_tilde;
  StraighteningReport rep;
  rep.points = count;
  for (int t = 0; t < count; ++t) {
    VectorXd p(ch.dim());
    VectorXd x(ch.k);
    for (auto& v : x) v = g(rng);
    const double r = radius * u(rng);
    p.head(ch.k) = x.normalized() * r;
    for (int q = 0; q < ch.s; ++q) p(ch.k + q) = 2.0 * std::numbers::pi * u(rng);
    const VectorXd Fp = st.map(p);
    if (r <= st.a) rep.identity_defect = std::max(rep.identity_defect, (Fp - p).cwiseAbs().maxCoeff());
    const VectorXd y = evaluate(Y, p);
    const double h = 1e-3;
    const VectorXd d = (8.0 * (st.map(p + h * y) - st.map(p - h * y)) - (st.map(p + 2 * h * y) - st.map(p - 2 * h * y))) /
                       (12.0 * h);
    rep.residual = std::max(rep.residual, (d - evaluate(target, Fp)).cwiseAbs().maxCoeff());
    VectorXd shift = VectorXd::Zero(ch.dim());
    for (int q = 0; q < ch.s; ++q) shift(ch.k + q) = u(rng);
    rep.bundle_defect = std::max(rep.bundle_defect, (st.map(p + shift) - Fp - shift).cwiseAbs().maxCoeff());
    VectorXd far = p;
    far.head(ch.k) = x.normalized() * (st.b + 3.0 * st.b * u(rng));
    rep.tail = std::max(rep.tail, evaluate(st.W_tilde, far).cwiseAbs().maxCoeff());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Truncated commutant of (X, X1) on R^k x T^s
// ---------------------------------------------------------------------------

namespace detail {

/// Exponent vectors of total degree <= d in k variables, graded-lex order.
inline std::vector<std::vector<int>> monomials_up_to(int k, int d) {
  std::vector<std::vector<int>> out;
  for (int deg = 0; deg <= d; ++deg) {
    std::vector<int> e(static_cast<std::size_t>(k), 0);
    // Enumerate compositions of deg into k parts, lexicographically descending.
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == k - 1) {
        e[pos] = left;
        out.push_back(e);
        return;
      }
      for (int v = left; v >= 0; --v) {
        e[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    if (k == 0) {
      if (deg == 0) out.push_back({});
    } else {
      rec(0, deg);
    }
  }
  return out;
}

/// Frequencies m with |m|_inf <= F and first nonzero entry positive.
inline std::vector<std::vector<int>> half_lattice(int s, int F) {
  std::vector<std::vector<int>> out;
  std::vector<int> m(static_cast<std::size_t>(s), -F);
  for (;;) {
    int first = 0;
    for (int v : m)
      if (v != 0) {
        first = v;
        break;
      }
    if (first > 0) out.push_back(m);
    int i = s - 1;
    while (i >= 0 && m[i] == F) m[i--] = -F;
    if (i < 0) break;
    ++m[i];
  }
  return out;
}

}  // namespace detail

struct Lemma31Result {
  int dimension = 0;
  int expected = 0;  // k^2 + s
  Density couple = Density::NotDense;
  std::vector<VFieldExpr> basis;
  int unknowns = 0;
};

/// Solves (a) [X, Y] = 0 and (b) [X1, Y] tangent to {0} x T^s at order 1
/// over Y in span{x^alpha trig(m . th)} with |alpha| <= deg_x and
/// |m|_inf <= max_freq, for X = xi + V and X1 = V1 + h X.
inline Lemma31Result lemma31_nullspace(int k, int s, const VectorXd& V, const VectorXd& V1, const Expr& h, int deg_x,
                                       int max_freq) {
  if (k < 1 || s < 1) throw PreconditionError("lemma31_nullspace: k and s must be positive");
  if (V.size() != s || V1.size() != s) throw DimensionError("lemma31_nullspace: V and V1 must have s entries");
  if (deg_x < 1 || max_freq < 0) throw PreconditionError("lemma31_nullspace: need deg_x >= 1 and max_freq >= 0");
  const Chart chart = Chart::product(k, s);
  // Validates h (jet condition) and V1 (vertical, constant).
  (void)product_field_X1(k, s, V1, h, V);

  const auto mons = detail::monomials_up_to(k, deg_x);
  const auto freqs = detail::half_lattice(s, max_freq);
  const int M = static_cast<int>(mons.size());
  const int T = 1 + 2 * static_cast<int>(freqs.size());  // 1, then (cos, sin) per frequency
  const int C = k + s;
  const long long unknowns = static_cast<long long>(C) * M * T;
  if (unknowns > 20000) throw PreconditionError("lemma31_nullspace: truncated system too large");
  const int N = static_cast<int>(unknowns);
  auto idx = [&](int comp, int mon, int trig) { return (comp * M + mon) * T + trig; };

  std::vector<double> mV(freqs.size()), mV1(freqs.size());
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    mV[f] = 0;
    mV1[f] = 0;
    for (int r = 0; r < s; ++r) {
      mV[f] += freqs[f][r] * V(r);
      mV1[f] += freqs[f][r] * V1(r);
    }
  }
  std::map<std::vector<int>, int> mon_index;
  for (int i = 0; i < M; ++i) mon_index[mons[i]] = i;

  std::vector<VectorXd> rows;
  auto new_row = [&]() { return VectorXd(VectorXd::Zero(N)); };
  // Adds w . d/dth applied to the trig coefficient block (comp, mon) into
  // rows indexed by output trig slot.
  auto add_dtheta = [&](std::vector<VectorXd>& out, int comp, int mon, const std::vector<double>& mw, double scale) {
    for (std::size_t f = 0; f < freqs.size(); ++f) {
      const int cs = 1 + 2 * static_cast<int>(f), sn = cs + 1;
      // d/dth cos = -(m.w) sin ; d/dth sin = (m.w) cos
      out[sn](idx(comp, mon, cs)) += -scale * mw[f];
      out[cs](idx(comp, mon, sn)) += scale * mw[f];
    }
  };
  auto add_value = [&](std::vector<VectorXd>& out, int comp, int mon, double scale) {
    for (int t = 0; t < T; ++t) out[t](idx(comp, mon, t)) += scale;
  };
  auto flush = [&](std::vector<VectorXd>& out) {
    for (auto& r : out)
      if (r.cwiseAbs().maxCoeff() > 0) rows.push_back(r);
  };

  // (a): horizontal (|alpha| - 1) c + V.d/dth c = 0 ; vertical |alpha| c + V.d/dth c = 0.
  for (int comp = 0; comp < C; ++comp) {
    for (int mi = 0; mi < M; ++mi) {
      int deg = 0;
      for (int v : mons[mi]) deg += v;
      std::vector<VectorXd> out(T, new_row());
      add_value(out, comp, mi, comp < k ? deg - 1.0 : static_cast<double>(deg));
      add_dtheta(out, comp, mi, mV, 1.0);
      flush(out);
    }
  }

  // (b) at x = 0, with h0 = h(0) and g0 = grad h(0).
  std::vector<double> zero(static_cast<std::size_t>(k + s), 0.0);
  const double h0 = evaluate_checked(h, zero);
  VectorXd g0(k);
  for (int l = 0; l < k; ++l) g0(l) = evaluate_checked(differentiate(h, l), zero);
  std::vector<double> w(freqs.size());
  for (std::size_t f = 0; f < freqs.size(); ++f) w[f] = mV1[f] + h0 * mV[f];
  const int m0 = mon_index.at(std::vector<int>(static_cast<std::size_t>(k), 0));
  auto mon_e = [&](int l) {
    std::vector<int> e(static_cast<std::size_t>(k), 0);
    e[l] = 1;
    return mon_index.at(e);
  };
  for (int j = 0; j < k; ++j) {
    std::vector<VectorXd> out(T, new_row());
    add_dtheta(out, j, m0, w, 1.0);
    add_value(out, j, m0, -h0);
    flush(out);
    for (int l = 0; l < k; ++l) {
      std::vector<VectorXd> o(T, new_row());
      add_value(o, j, mon_e(l), h0);
      add_dtheta(o, j, m0, mV, g0(l));
      add_dtheta(o, j, mon_e(l), w, 1.0);
      add_value(o, j, m0, -g0(l));
      add_value(o, j, mon_e(l), -h0);
      if (j == l)
        for (int q = 0; q < k; ++q) add_value(o, q, m0, -g0(q));
      flush(o);
    }
  }
  for (int r = 0; r < s; ++r) {
    std::vector<VectorXd> out(T, new_row());
    add_dtheta(out, k + r, m0, w, 1.0);
    for (int q = 0; q < k; ++q) add_value(out, q, m0, -V(r) * g0(q));
    flush(out);
  }

  MatrixXd A(static_cast<Eigen::Index>(rows.size()), N);
  for (std::size_t i = 0; i < rows.size(); ++i) A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  const MatrixXd null = nullspace(A);

  Lemma31Result res;
  res.unknowns = N;
  res.dimension = static_cast<int>(null.cols());
  res.expected = k * k + s;
  const GroupSpec torus = make_group(Family::Torus, s);
  res.couple = is_dense_couple(torus, torus_element(torus, V), torus_element(torus, V1));
  if (null.cols() == 0) return res;
  const MatrixXd canon = rref_rows(null.transpose());
  for (Eigen::Index b = 0; b < canon.rows(); ++b) {
    std::vector<Expr> comps;
    for (int comp = 0; comp < C; ++comp) {
      Expr sum = constant(0.0);
      for (int mi = 0; mi < M; ++mi) {
        Expr mon = constant(1.0);
        for (int j = 0; j < k; ++j) mon = mon * pow(xvar(j), mons[mi][j]);
        for (int t = 0; t < T; ++t) {
          const double cf = snap_simple(canon(b, idx(comp, mi, t)));
          if (cf == 0.0) continue;
          Expr trig = constant(1.0);
          if (t > 0) {
            const auto& m = freqs[static_cast<std::size_t>((t - 1) / 2)];
            Expr arg = constant(0.0);
            for (int r = 0; r < s; ++r) arg = arg + static_cast<double>(m[r]) * thvar(r, k);
            trig = (t % 2 == 1) ? cos(arg) : sin(arg);
          }
          sum = sum + cf * (mon * trig);
        }
      }
      comps.push_back(sum);
    }
    res.basis.emplace_back(chart, std::move(comps));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Fifth-jet rigidity of scalings
// ---------------------------------------------------------------------------

/// sup over sampled |x| <= radius of |h(a x) - h(x)|, with samples including
/// points along every coordinate axis.
inline double scaling_defect(const Expr& h, int k, double a, double radius = 0.3, std::uint64_t seed = 33,
                             int samples = 400) {
  Rng rng = make_rng(seed, 0x33);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  auto probe = [&](const VectorXd& x) {
    std::vector<double> p(x.data(), x.data() + x.size());
    std::vector<double> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = a * p[i];
    worst = std::max(worst, std::abs(evaluate_checked(h, q) - evaluate_checked(h, p)));
  };
  for (int j = 0; j < k; ++j)
    for (int i = 1; i <= 30; ++i) {
      const double r = radius * i / 30.0;
      probe(r * VectorXd::Unit(k, j));
      probe(-r * VectorXd::Unit(k, j));
    }
  for (int t = 0; t < samples; ++t) {
    VectorXd x(k);
    for (auto& v : x) v = g(rng);
    probe(x.normalized() * radius * std::pow(u(rng), 1.0 / k));
  }
  return worst;
}

/// d^5/dy^5 h(y d) at y = 0, by exact differentiation along direction d.
inline double fifth_derivative_at_origin(const Expr& h, const VectorXd& d) {
  const int k = static_cast<int>(d.size());
  Expr e = h;
  for (int n = 0; n < 5; ++n) {
    Expr next = constant(0.0);
    for (int j = 0; j < k; ++j)
      if (d(j) != 0.0) next = next + d(j) * differentiate(e, j);
    e = next;
  }
  std::vector<double> zero(static_cast<std::size_t>(k), 0.0);
  return evaluate_checked(e, zero);
}

}  // namespace detvec

#endif  // DETVEC_FLOWS_HPP
