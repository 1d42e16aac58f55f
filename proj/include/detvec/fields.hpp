#ifndef DETVEC_FIELDS_HPP
#define DETVEC_FIELDS_HPP

// Vector fields and maps on coordinate charts, built from expression trees.

#include "detvec/errors.hpp"
#include "detvec/expr.hpp"
#include "detvec/linalg.hpp"
#include "detvec/random.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace detvec {

struct Chart {
  enum class Kind { Euclidean, ProductRT };
  Kind kind = Kind::Euclidean;
  int k = 0;  // Euclidean coordinates
  int s = 0;  // torus angles
  bool punctured = false;  // origin of the Euclidean part excluded

  static Chart euclidean(int m, bool punctured = false) {
    if (m < 1) throw DimensionError("chart dimension must be positive");
    return Chart{Kind::Euclidean, m, 0, punctured};
  }
  static Chart product(int k, int s) {
    if (k < 0 || s < 0 || k + s < 1) throw DimensionError("invalid product chart");
    return Chart{Kind::ProductRT, k, s, false};
  }

  int dim() const { return k + s; }
  bool operator==(const Chart& o) const {
    return kind == o.kind && k == o.k && s == o.s && punctured == o.punctured;
  }
  std::string describe() const {
    if (kind == Kind::Euclidean) return "R^" + std::to_string(k) + (punctured ? "\\{0}" : "");
    return "R^" + std::to_string(k) + "xT^" + std::to_string(s);
  }
};

namespace detail {

inline void check_point(const Chart& c, std::span<const double> p) {
  if (static_cast<int>(p.size()) != c.dim()) throw DimensionError("point dimension does not match chart " + c.describe());
  if (c.punctured) {
    bool zero = true;
    for (int j = 0; j < c.k; ++j)
      if (p[j] != 0.0) zero = false;
    if (zero) throw DomainError("point lies outside the punctured chart " + c.describe());
  }
}

inline std::span<const double> as_span(const VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace detail

/// Scalar evaluation with chart checks.
inline double evaluate(const Expr& e, const Chart& c, const VectorXd& p) {
  detail::check_point(c, detail::as_span(p));
  return evaluate_checked(e, detail::as_span(p));
}

// ---------------------------------------------------------------------------
// Vector fields
// ---------------------------------------------------------------------------

struct VFieldExpr {
  Chart chart;
  std::vector<Expr> components;

  VFieldExpr() = default;
  VFieldExpr(Chart c, std::vector<Expr> comps) : chart(c), components(std::move(comps)) {
    if (static_cast<int>(components.size()) != chart.dim())
      throw DimensionError("field has " + std::to_string(components.size()) + " components on a chart of dimension " +
                           std::to_string(chart.dim()));
  }
  int dim() const { return chart.dim(); }
};

inline VectorXd evaluate(const VFieldExpr& X, const VectorXd& p) {
  const auto sp = detail::as_span(p);
  detail::check_point(X.chart, sp);
  VectorXd out(X.dim());
  for (int i = 0; i < X.dim(); ++i) out(i) = evaluate_checked(X.components[i], sp);
  return out;
}

inline std::string to_string(const VFieldExpr& X) {
  std::string s = "[";
  for (std::size_t i = 0; i < X.components.size(); ++i) {
    if (i) s += ", ";
    s += to_string(X.components[i]);
  }
  return s + "]";
}

/// Symbolic Jacobian, J[i][j] = d component_i / d coordinate_j.
inline std::vector<std::vector<Expr>> jacobian(const std::vector<Expr>& comps, int dim) {
  std::vector<std::vector<Expr>> J(comps.size(), std::vector<Expr>(static_cast<std::size_t>(dim)));
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (int j = 0; j < dim; ++j) J[i][j] = differentiate(comps[i], j);
  return J;
}

inline MatrixXd evaluate_matrix(const std::vector<std::vector<Expr>>& J, std::span<const double> p) {
  const Eigen::Index r = static_cast<Eigen::Index>(J.size());
  const Eigen::Index c = r ? static_cast<Eigen::Index>(J[0].size()) : 0;
  MatrixXd M(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) M(i, j) = evaluate_checked(J[i][j], p);
  return M;
}

/// Field x -> A x (angles untouched on product charts; A acts on the first
/// A.rows() coordinates and must be square).
inline VFieldExpr linear_field(const MatrixXd& A, const Chart& c) {
  if (A.rows() != A.cols() || A.rows() > c.k) throw DimensionError("linear field matrix does not fit the chart");
  std::vector<Expr> comps(static_cast<std::size_t>(c.dim()), constant(0.0));
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Expr s = constant(0.0);
    for (Eigen::Index j = 0; j < A.cols(); ++j) s = s + A(i, j) * xvar(static_cast<int>(j));
    comps[i] = s;
  }
  return VFieldExpr(c, std::move(comps));
}

inline VFieldExpr scale(const Expr& f, const VFieldExpr& X) {
  std::vector<Expr> comps;
  for (const auto& c : X.components) comps.push_back(f * c);
  return VFieldExpr(X.chart, std::move(comps));
}

inline VFieldExpr operator+(const VFieldExpr& a, const VFieldExpr& b) {
  if (!(a.chart == b.chart)) throw DimensionError("fields live on different charts");
  std::vector<Expr> comps;
  for (int i = 0; i < a.dim(); ++i) comps.push_back(a.components[i] + b.components[i]);
  return VFieldExpr(a.chart, std::move(comps));
}

inline VFieldExpr operator-(const VFieldExpr& a, const VFieldExpr& b) {
  if (!(a.chart == b.chart)) throw DimensionError("fields live on different charts");
  std::vector<Expr> comps;
  for (int i = 0; i < a.dim(); ++i) comps.push_back(a.components[i] - b.components[i]);
  return VFieldExpr(a.chart, std::move(comps));
}

/// [X, Y] = DY.X - DX.Y
inline VFieldExpr lie_bracket_fields(const VFieldExpr& X, const VFieldExpr& Y) {
  if (!(X.chart == Y.chart)) throw DimensionError("bracket of fields on different charts");
  const int n = X.dim();
  std::vector<Expr> comps;
  for (int i = 0; i < n; ++i) {
    Expr s = constant(0.0);
    for (int j = 0; j < n; ++j) {
      s = s + differentiate(Y.components[i], j) * X.components[j];
      s = s - differentiate(X.components[i], j) * Y.components[j];
    }
    comps.push_back(s);
  }
  return VFieldExpr(X.chart, std::move(comps));
}

/// Max over samples of |X(p + 2 pi e_theta) - X(p)| for each angle direction.
inline double periodicity_residual(const VFieldExpr& X, std::uint64_t seed, int samples = 50) {
  if (X.chart.s == 0) return 0.0;
  Rng rng = make_rng(seed, 0x9e71);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    VectorXd p(X.dim());
    for (int j = 0; j < X.chart.k; ++j) p(j) = gauss(rng);
    for (int r = 0; r < X.chart.s; ++r) p(X.chart.k + r) = angle(rng);
    const VectorXd base = evaluate(X, p);
    for (int r = 0; r < X.chart.s; ++r) {
      VectorXd q = p;
      q(X.chart.k + r) += 2.0 * std::numbers::pi;
      worst = std::max(worst, (evaluate(X, q) - base).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Maps
// ---------------------------------------------------------------------------

struct MapExpr {
  Chart chart;
  std::vector<Expr> components;
  std::optional<MatrixXd> linear;  // set for the Linear tag
  std::vector<std::vector<Expr>> jac;  // exact partials (empty for Linear)

  bool is_linear() const { return linear.has_value(); }
  int dim() const { return chart.dim(); }

  static MapExpr make_linear(const MatrixXd& A, const Chart& c) {
    if (A.rows() != c.dim() || A.cols() != c.dim()) throw DimensionError("linear map matrix does not match chart");
    MapExpr m;
    m.chart = c;
    m.linear = A;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      Expr s = constant(0.0);
      for (Eigen::Index j = 0; j < A.cols(); ++j) s = s + A(i, j) * xvar(static_cast<int>(j));
      m.components.push_back(s);
    }
    return m;
  }

  static MapExpr make_nonlinear(const Chart& c, std::vector<Expr> comps) {
    if (static_cast<int>(comps.size()) != c.dim()) throw DimensionError("map component count does not match chart");
    MapExpr m;
    m.chart = c;
    m.components = std::move(comps);
    m.jac = jacobian(m.components, c.dim());
    return m;
  }

  static MapExpr identity(const Chart& c) { return make_linear(MatrixXd::Identity(c.dim(), c.dim()), c); }
};

inline VectorXd evaluate(const MapExpr& F, const VectorXd& p) {
  const auto sp = detail::as_span(p);
  detail::check_point(F.chart, sp);
  if (F.linear) return *F.linear * p;
  VectorXd out(F.dim());
  for (int i = 0; i < F.dim(); ++i) out(i) = evaluate_checked(F.components[i], sp);
  return out;
}

inline MatrixXd differential(const MapExpr& F, const VectorXd& p) {
  const auto sp = detail::as_span(p);
  detail::check_point(F.chart, sp);
  if (F.linear) return *F.linear;
  return evaluate_matrix(F.jac, sp);
}

inline std::string to_string(const MapExpr& F) {
  return to_string(VFieldExpr(F.chart, F.components));
}

/// R(p) = DF(p) X(p) - X(F(p)). F preserves X iff R vanishes identically.
inline VectorXd pushforward_residual(const MapExpr& F, const VFieldExpr& X, const VectorXd& p) {
  if (!(F.chart.dim() == X.chart.dim())) throw DimensionError("map and field charts differ");
  return differential(F, p) * evaluate(X, p) - evaluate(X, evaluate(F, p));
}

/// Max deviation between the component expressions of a Linear map and its
/// stored matrix over `samples` Gaussian points.
inline double linear_tag_residual(const MapExpr& F, std::uint64_t seed, int samples = 100) {
  if (!F.linear) return 0.0;
  Rng rng = make_rng(seed, 0x11ea);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    VectorXd p(F.dim());
    for (auto& v : p) v = gauss(rng);
    const auto sp = detail::as_span(p);
    VectorXd sym(F.dim());
    for (int i = 0; i < F.dim(); ++i) sym(i) = evaluate_checked(F.components[i], sp);
    worst = std::max(worst, (sym - *F.linear * p).cwiseAbs().maxCoeff());
  }
  return worst;
}

/// G then F, as a Nonlinear map unless both are Linear.
inline MapExpr compose(const MapExpr& F, const MapExpr& G) {
  if (!(F.chart == G.chart)) throw DimensionError("composition of maps on different charts");
  if (F.linear && G.linear) return MapExpr::make_linear(*F.linear * *G.linear, F.chart);
  std::vector<Expr> comps;
  for (const auto& c : F.components) comps.push_back(substitute(c, G.components));
  return MapExpr::make_nonlinear(F.chart, std::move(comps));
}

}  // namespace detvec

#endif  // DETVEC_FIELDS_HPP
