#ifndef DETVEC_AUTCHECK_HPP
#define DETVEC_AUTCHECK_HPP

// Sampled checks of F_* X = X, for single maps, Haar samples of a group and
// samples from outside it, plus the exact space of polynomial fields
// invariant under a linear action.

#include "detvec/constructions.hpp"
#include "detvec/errors.hpp"
#include "detvec/fields.hpp"
#include "detvec/flows.hpp"
#include "detvec/lie.hpp"
#include "detvec/linalg.hpp"
#include "detvec/random.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace detvec {

// ---------------------------------------------------------------------------
// Sample plans
// ---------------------------------------------------------------------------

struct SamplePlan {
  enum class Domain { Ball, Sphere, Annulus, ProductBox };
  Domain domain = Domain::Ball;
  double r1 = 1.0;  // radius (Ball, Sphere), inner radius (Annulus), half-width (ProductBox)
  double r2 = 0.0;  // outer radius (Annulus)
  int count = 100;
  std::uint64_t seed = 0;

  static SamplePlan ball(double r, int count, std::uint64_t seed) { return {Domain::Ball, r, 0.0, count, seed}; }
  static SamplePlan sphere(double r, int count, std::uint64_t seed) { return {Domain::Sphere, r, 0.0, count, seed}; }
  static SamplePlan annulus(double a, double b, int count, std::uint64_t seed) {
    return {Domain::Annulus, a, b, count, seed};
  }
  static SamplePlan box(double half_width, int count, std::uint64_t seed) {
    return {Domain::ProductBox, half_width, 0.0, count, seed};
  }

  void validate() const {
    if (count < 1) throw PreconditionError("sample plan: count must be at least 1");
    if (!(r1 > 0)) throw PreconditionError("sample plan: radius must be positive");
    if (domain == Domain::Annulus && !(r2 > r1)) throw PreconditionError("sample plan: annulus radii must satisfy r1 < r2");
  }

  std::string describe() const {
    switch (domain) {
      case Domain::Ball: return "Ball(" + format_number(r1) + ")";
      case Domain::Sphere: return "Sphere(" + format_number(r1) + ")";
      case Domain::Annulus: return "Annulus(" + format_number(r1) + ", " + format_number(r2) + ")";
      case Domain::ProductBox: return "ProductBox(" + format_number(r1) + ")";
    }
    return "?";
  }
};

/// Point i depends only on (seed, i). Angles of product charts are uniform
/// in [0, 2 pi); the plan shapes the Euclidean part.
inline VectorXd sample_point(const SamplePlan& plan, const Chart& c, std::size_t i) {
  Rng rng = make_rng(plan.seed, 0x5a3e0000ULL + i);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = c.k;
  VectorXd p(c.dim());
  VectorXd dir(k);
  do {
    for (auto& v : dir) v = g(rng);
  } while (k > 0 && dir.norm() == 0.0);
  if (k > 0) dir.normalize();
  switch (plan.domain) {
    case SamplePlan::Domain::Ball: p.head(k) = dir * plan.r1 * std::pow(u(rng), 1.0 / k); break;
    case SamplePlan::Domain::Sphere: p.head(k) = dir * plan.r1; break;
    case SamplePlan::Domain::Annulus: {
      const double lo = std::pow(plan.r1, k), hi = std::pow(plan.r2, k);
      p.head(k) = dir * std::pow(lo + (hi - lo) * u(rng), 1.0 / k);
      break;
    }
    case SamplePlan::Domain::ProductBox:
      for (int j = 0; j < k; ++j) p(j) = plan.r1 * (2.0 * u(rng) - 1.0);
      break;
  }
  for (int r = 0; r < c.s; ++r) p(k + r) = 2.0 * std::numbers::pi * u(rng);
  return p;
}

inline std::vector<VectorXd> sample_points(const SamplePlan& plan, const Chart& c) {
  plan.validate();
  std::vector<VectorXd> pts;
  pts.reserve(static_cast<std::size_t>(plan.count));
  for (int i = 0; i < plan.count; ++i) pts.push_back(sample_point(plan, c, static_cast<std::size_t>(i)));
  return pts;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class Verdict { Preserves, Violates, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Preserves: return "Preserves";
    case Verdict::Violates: return "Violates";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline Verdict parse_verdict(const std::string& s) {
  if (s == "Preserves") return Verdict::Preserves;
  if (s == "Violates") return Verdict::Violates;
  if (s == "Inconclusive") return Verdict::Inconclusive;
  throw PreconditionError("unknown verdict '" + s + "'");
}

struct Thresholds {
  double preserve_tol = 1e-8;
  double violate_floor = 1e-4;
};

/// Classification of a scaled residual |R| / (1 + field magnitude).
inline Verdict classify(double scaled, const Thresholds& th = {}) {
  if (scaled < th.preserve_tol) return Verdict::Preserves;
  if (scaled > th.violate_floor) return Verdict::Violates;
  return Verdict::Inconclusive;
}

struct CaseReport {
  std::string map;
  std::string field;
  double max = 0.0;         // raw max |R(p)|
  double mean = 0.0;        // raw mean over evaluated points
  VectorXd argmax;          // sample attaining the scaled max
  double scaled_max = 0.0;  // max |R(p)| / (1 + magnitude)
  int evaluated = 0;
  int skipped = 0;  // points outside the domain of the map or field
  Verdict verdict = Verdict::Inconclusive;
};

struct ResidualReport {
  std::vector<CaseReport> cases;
  Verdict verdict = Verdict::Inconclusive;
  Thresholds thresholds;

  double max() const {
    double m = 0.0;
    for (const auto& c : cases) m = std::max(m, c.max);
    return m;
  }
  double min_case_max() const {
    double m = INFINITY;
    for (const auto& c : cases) m = std::min(m, c.max);
    return cases.empty() ? 0.0 : m;
  }
  bool all(Verdict v) const {
    for (const auto& c : cases)
      if (c.verdict != v) return false;
    return !cases.empty();
  }
};

/// Any Violates wins; Preserves needs every case to preserve.
inline Verdict combine_verdicts(const std::vector<CaseReport>& cases) {
  if (cases.empty()) return Verdict::Inconclusive;
  bool all_pres = true;
  for (const auto& c : cases) {
    if (c.verdict == Verdict::Violates) return Verdict::Violates;
    if (c.verdict != Verdict::Preserves) all_pres = false;
  }
  return all_pres ? Verdict::Preserves : Verdict::Inconclusive;
}

namespace detail {

struct PointResidual {
  bool ok = false;
  double raw = 0.0;
  double scaled = 0.0;
};

inline CaseReport reduce_case(std::string map, std::string field, const std::vector<PointResidual>& rs,
                              const std::vector<VectorXd>& pts, const Thresholds& th) {
  CaseReport c;
  c.map = std::move(map);
  c.field = std::move(field);
  double sum = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!rs[i].ok) {
      ++c.skipped;
      continue;
    }
    ++c.evaluated;
    sum += rs[i].raw;
    c.max = std::max(c.max, rs[i].raw);
    if (c.evaluated == 1 || rs[i].scaled > c.scaled_max) {
      c.scaled_max = rs[i].scaled;
      arg = i;
    }
  }
  if (c.evaluated == 0) {
    c.verdict = Verdict::Inconclusive;
    return c;
  }
  c.mean = sum / c.evaluated;
  c.argmax = pts[arg];
  c.verdict = classify(c.scaled_max, th);
  return c;
}

inline bool compatible(const Chart& a, const Chart& b) { return a.kind == b.kind && a.k == b.k && a.s == b.s; }

}  // namespace detail

/// Pushforward residual of every field under F at the plan's points.
inline ResidualReport check_automorphism(const MapExpr& F, const std::vector<VFieldExpr>& fields, const SamplePlan& plan,
                                         int jobs = 1, const std::string& map_name = "F",
                                         const std::vector<std::string>& field_names = {},
                                         const Thresholds& th = {}) {
  for (const auto& X : fields)
    if (!detail::compatible(F.chart, X.chart))
      throw DimensionError("check_automorphism: map chart " + F.chart.describe() + " does not match field chart " +
                           X.chart.describe());
  const auto pts = sample_points(plan, F.chart);
  const std::size_t nf = fields.size();
  std::vector<std::vector<detail::PointResidual>> res(nf, std::vector<detail::PointResidual>(pts.size()));
  parallel_for(pts.size(), resolve_jobs(jobs), [&](std::size_t i) {
    const VectorXd& p = pts[i];
    MatrixXd D;
    VectorXd Fp;
    try {
      D = differential(F, p);
      Fp = evaluate(F, p);
    } catch (const DomainError&) {
      return;
    }
    for (std::size_t f = 0; f < nf; ++f) {
      try {
        const VectorXd push = D * evaluate(fields[f], p);
        const VectorXd back = evaluate(fields[f], Fp);
        const double raw = (push - back).norm();
        const double mag = std::max(push.norm(), back.norm());
        res[f][i] = {true, raw, raw / (1.0 + mag)};
      } catch (const DomainError&) {
      }
    }
  });
  ResidualReport rep;
  rep.thresholds = th;
  for (std::size_t f = 0; f < nf; ++f) {
    const std::string name = f < field_names.size() ? field_names[f] : "X" + std::to_string(f);
    rep.cases.push_back(detail::reduce_case(map_name, name, res[f], pts, th));
  }
  rep.verdict = combine_verdicts(rep.cases);
  return rep;
}

/// Symbolic DF X - X o F, simplified; an all-zero result proves F_* X = X.
inline std::vector<Expr> symbolic_residual(const MapExpr& F, const VFieldExpr& X) {
  if (!detail::compatible(F.chart, X.chart)) throw DimensionError("symbolic_residual: chart mismatch");
  const int n = X.dim();
  const auto J = F.linear ? std::vector<std::vector<Expr>>() : F.jac;
  std::vector<Expr> out;
  for (int i = 0; i < n; ++i) {
    Expr push = constant(0.0);
    for (int j = 0; j < n; ++j) {
      const Expr dij = F.linear ? constant((*F.linear)(i, j)) : J[i][j];
      push = push + dij * X.components[j];
    }
    out.push_back(push - substitute(X.components[i], F.components));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Group samples
// ---------------------------------------------------------------------------

inline Chart representation_chart(const GroupSpec& spec) { return Chart::euclidean(spec.real_dim()); }

/// Haar sample i for the plan's seed, as a linear map of R^{real_dim}.
inline MatrixXd haar_matrix(const GroupSpec& spec, std::uint64_t seed, std::size_t i) {
  Rng rng = make_rng(seed, 0x4aa40000ULL + i);
  return real_rep(spec, haar_sample(spec, rng).matrix);
}

/// check_automorphism over n_samples Haar samples; one case per (sample, field).
inline ResidualReport group_preserves(const GroupSpec& spec, const std::vector<VFieldExpr>& fields, int n_samples,
                                      const SamplePlan& plan, int jobs = 1,
                                      const std::vector<std::string>& field_names = {}, const Thresholds& th = {}) {
  if (n_samples < 1) throw PreconditionError("group_preserves: need at least one sample");
  const Chart c = fields.empty() ? representation_chart(spec) : fields.front().chart;
  if (c.k != spec.real_dim() || c.s != 0)
    throw DimensionError("group_preserves: fields live on " + c.describe() + " but " + to_string(spec.id) + " acts on R^" +
                         std::to_string(spec.real_dim()));
  ResidualReport rep;
  rep.thresholds = th;
  for (int i = 0; i < n_samples; ++i) {
    const MapExpr F = MapExpr::make_linear(haar_matrix(spec, plan.seed, static_cast<std::size_t>(i)), c);
    const auto r = check_automorphism(F, fields, plan, jobs, to_string(spec.id) + "[" + std::to_string(i) + "]",
                                      field_names, th);
    rep.cases.insert(rep.cases.end(), r.cases.begin(), r.cases.end());
  }
  rep.verdict = combine_verdicts(rep.cases);
  return rep;
}

/// Draws linear maps from a superset and rejects members of the target group.
struct OutsideSampler {
  std::string name;
  std::function<MatrixXd(Rng&)> draw;
  std::function<bool(const MatrixXd&)> reject;
};

/// Distance of a real matrix from the linear image of a group.
inline double linear_membership_residual(const GroupSpec& spec, const MatrixXd& g) {
  const int n = spec.real_dim();
  if (g.rows() != n || g.cols() != n) return INFINITY;
  switch (spec.id.family) {
    case Family::SO:
    case Family::O:
    case Family::Sp: return membership_residual(spec, g.cast<cplx>());
    case Family::U:
    case Family::SU: {
      const int m = spec.matrix_dim;
      MatrixXcd z(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) z(a, b) = cplx(g(2 * a, 2 * b), g(2 * a + 1, 2 * b));
      const MatrixXd J = complex_structure(m);
      return (g * J - J * g).norm() + membership_residual(spec, z);
    }
    default: throw PreconditionError("linear_membership_residual: unsupported family " + to_string(spec.id));
  }
}

/// Haar samples of `superset` at membership distance >= margin from `target`.
inline OutsideSampler complement_sampler(const GroupSpec& superset, const GroupSpec& target, double margin = 0.1) {
  if (superset.real_dim() != target.real_dim()) throw DimensionError("complement_sampler: groups act on different spaces");
  (void)linear_membership_residual(target, MatrixXd::Identity(target.real_dim(), target.real_dim()));
  OutsideSampler s;
  s.name = to_string(superset.id) + "\\" + to_string(target.id);
  s.draw = [superset](Rng& rng) { return real_rep(superset, haar_sample(superset, rng).matrix); };
  s.reject = [target, margin](const MatrixXd& g) { return linear_membership_residual(target, g) < margin; };
  return s;
}

/// Gaussian matrices, rejecting (numerically) singular and orthogonal ones.
inline OutsideSampler nonorthogonal_sampler(int n) {
  OutsideSampler s;
  s.name = "GL(" + std::to_string(n) + ")\\O(" + std::to_string(n) + ")";
  s.draw = [n](Rng& rng) {
    std::normal_distribution<double> g;
    MatrixXd m(n, n);
    for (auto& v : m.reshaped()) v = g(rng);
    return m;
  };
  s.reject = [n](const MatrixXd& m) {
    return std::abs(m.determinant()) < 1e-6 || (m.transpose() * m - MatrixXd::Identity(n, n)).norm() < 1e-8;
  };
  return s;
}

inline MatrixXd draw_outside(const OutsideSampler& s, std::uint64_t seed, std::size_t i) {
  Rng rng = make_rng(seed, 0x0a7e0000ULL + i);
  for (int attempt = 0; attempt <= 10000; ++attempt) {
    MatrixXd m = s.draw(rng);
    if (!s.reject(m)) return m;
  }
  throw NumericError("probe_outside: sampler " + s.name + " exceeded 10^4 rejections");
}

/// check_automorphism over n_samples maps from outside the group. The verdict
/// is Violates only if every sampled outsider violates, Preserves only if
/// every one preserves.
inline ResidualReport probe_outside(const std::vector<VFieldExpr>& fields, int n_samples, const OutsideSampler& sampler,
                                    const SamplePlan& plan, int jobs = 1,
                                    const std::vector<std::string>& field_names = {}, const Thresholds& th = {}) {
  if (n_samples < 1) throw PreconditionError("probe_outside: need at least one sample");
  if (fields.empty()) throw PreconditionError("probe_outside: no fields");
  const Chart c = fields.front().chart;
  ResidualReport rep;
  rep.thresholds = th;
  std::vector<Verdict> per_sample;
  for (int i = 0; i < n_samples; ++i) {
    const MatrixXd m = draw_outside(sampler, plan.seed, static_cast<std::size_t>(i));
    if (m.rows() != c.dim()) throw DimensionError("probe_outside: sampler dimension does not match the fields");
    const MapExpr F = MapExpr::make_linear(m, c);
    const auto r = check_automorphism(F, fields, plan, jobs, sampler.name + "[" + std::to_string(i) + "]", field_names, th);
    per_sample.push_back(r.verdict);
    rep.cases.insert(rep.cases.end(), r.cases.begin(), r.cases.end());
  }
  bool all_v = true, all_p = true;
  for (Verdict v : per_sample) {
    all_v = all_v && v == Verdict::Violates;
    all_p = all_p && v == Verdict::Preserves;
  }
  rep.verdict = all_v ? Verdict::Violates : all_p ? Verdict::Preserves : Verdict::Inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------
// Invariant polynomial fields
// ---------------------------------------------------------------------------

struct InvariantSpace {
  int m = 0;       // dimension of the representation space
  int degree = 0;  // max total degree
  int dimension = 0;
  std::vector<std::vector<int>> monomials;  // graded-lex, degrees 0..d
  MatrixXd coefficients;  // column b: coefficient of (monomial a, component i) at row a * m + i
  std::vector<VFieldExpr> basis;
};

/// Polynomial fields X of degree <= d with DX(x) A x = A X(x) for every
/// generator A and X(R x) = R X(x) for every discrete generator R (diagonal
/// sign matrices).
inline InvariantSpace invariant_field_space(const std::vector<MatrixXd>& generators, const std::vector<MatrixXd>& discrete,
                                            int m, int d) {
  if (d < 0 || d > 7) throw PreconditionError("invariant_field_space: degree must be in [0, 7]");
  if (m < 1) throw DimensionError("invariant_field_space: empty representation");
  for (const auto& A : generators)
    if (A.rows() != m || A.cols() != m) throw DimensionError("invariant_field_space: generator size mismatch");
  for (const auto& R : discrete) {
    if (R.rows() != m || R.cols() != m) throw DimensionError("invariant_field_space: discrete generator size mismatch");
    if ((R - MatrixXd(R.diagonal().asDiagonal())).norm() != 0.0 || (R.diagonal().cwiseAbs().array() != 1.0).any())
      throw PreconditionError("invariant_field_space: discrete generators must be diagonal sign matrices");
  }
  // Monomials of degree <= d in m variables: C(m + d, d).
  long double count = 1.0L;
  for (int i = 1; i <= d; ++i) count = count * (m + i) / i;
  if (count * m > 100000.0L) throw PreconditionError("invariant_field_space: coefficient space exceeds 10^5");
  InvariantSpace out;
  out.m = m;
  out.degree = d;
  out.monomials = detail::monomials_up_to(m, d);
  const long long total = static_cast<long long>(out.monomials.size()) * m;
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < out.monomials.size(); ++i) index[out.monomials[i]] = static_cast<int>(i);

  std::vector<VectorXd> cols;
  // Each degree is an independent block since the action preserves degree.
  std::size_t start = 0;
  for (int deg = 0; deg <= d; ++deg) {
    std::size_t end = start;
    while (end < out.monomials.size()) {
      int s = 0;
      for (int v : out.monomials[end]) s += v;
      if (s != deg) break;
      ++end;
    }
    const int nm = static_cast<int>(end - start);
    const int nu = nm * m;
    const int rows_per = nu;
    MatrixXd sys = MatrixXd::Zero(static_cast<Eigen::Index>(rows_per) * (generators.size() + discrete.size()), nu);
    Eigen::Index row0 = 0;
    for (const auto& A : generators) {
      for (int a = 0; a < nm; ++a) {
        const auto& alpha = out.monomials[start + a];
        for (int i = 0; i < m; ++i) {
          const int col = a * m + i;
          for (int l = 0; l < m; ++l) {
            if (alpha[l] == 0) continue;
            for (int q = 0; q < m; ++q) {
              if (A(l, q) == 0.0) continue;
              auto beta = alpha;
              --beta[l];
              ++beta[q];
              const int b = index.at(beta) - static_cast<int>(start);
              sys(row0 + b * m + i, col) += alpha[l] * A(l, q);
            }
          }
          for (int k = 0; k < m; ++k)
            if (A(k, i) != 0.0) sys(row0 + a * m + k, col) -= A(k, i);
        }
      }
      row0 += rows_per;
    }
    for (const auto& R : discrete) {
      for (int a = 0; a < nm; ++a) {
        const auto& alpha = out.monomials[start + a];
        double sign = 1.0;
        for (int l = 0; l < m; ++l)
          if (alpha[l] % 2 != 0) sign *= R(l, l);
        for (int i = 0; i < m; ++i) sys(row0 + a * m + i, a * m + i) = sign - R(i, i);
      }
      row0 += rows_per;
    }
    const MatrixXd null = sys.rows() == 0 ? MatrixXd::Identity(nu, nu) : nullspace(sys);
    if (null.cols() > 0) {
      const MatrixXd canon = rref_rows(null.transpose());
      for (Eigen::Index b = 0; b < canon.rows(); ++b) {
        VectorXd full = VectorXd::Zero(total);
        for (int u = 0; u < nu; ++u) full(static_cast<Eigen::Index>(start) * m + u) = snap_simple(canon(b, u));
        cols.push_back(full);
      }
    }
    start = end;
  }
  out.dimension = static_cast<int>(cols.size());
  out.coefficients = MatrixXd::Zero(total, out.dimension);
  for (int b = 0; b < out.dimension; ++b) out.coefficients.col(b) = cols[b];
  const Chart c = Chart::euclidean(m);
  for (int b = 0; b < out.dimension; ++b) {
    std::vector<Expr> comps(static_cast<std::size_t>(m), constant(0.0));
    for (std::size_t a = 0; a < out.monomials.size(); ++a) {
      for (int i = 0; i < m; ++i) {
        const double cf = out.coefficients(static_cast<Eigen::Index>(a) * m + i, b);
        if (cf == 0.0) continue;
        Expr mon = constant(1.0);
        for (int j = 0; j < m; ++j) mon = mon * pow(xvar(j), out.monomials[a][j]);
        comps[i] = comps[i] + cf * mon;
      }
    }
    out.basis.emplace_back(c, std::move(comps));
  }
  return out;
}

inline InvariantSpace invariant_field_space(const GroupSpec& spec, int d) {
  std::vector<MatrixXd> gens;
  for (const auto& a : spec.algebra_basis) gens.push_back(real_rep(spec, a));
  return invariant_field_space(gens, spec.component_reps, spec.real_dim(), d);
}

/// Equal invariant spaces, by mutual containment of the coefficient spans.
inline bool compare_invariant_spaces(const GroupSpec& a, const GroupSpec& b, int d) {
  if (a.real_dim() != b.real_dim()) throw DimensionError("compare_invariant_spaces: groups act on different spaces");
  const auto sa = invariant_field_space(a, d);
  const auto sb = invariant_field_space(b, d);
  if (sa.dimension != sb.dimension) return false;
  if (sa.dimension == 0) return true;
  return same_column_span(sa.coefficients, sb.coefficients);
}

// ---------------------------------------------------------------------------
// Flow commutation
// ---------------------------------------------------------------------------

struct FlowCommutationReport {
  ResidualReport flows;       // cases "Phi_a", "Phi_b"
  ResidualReport pushforward; // check_automorphism(F, {Z})
  bool consistent = false;    // verdicts agree, or one of them is Inconclusive
};

/// ||F(Phi_t(p)) - Phi_t(F(p))|| for t in {a, b}, cross-checked against the
/// pushforward residual of Z under F.
inline FlowCommutationReport flow_commutation_probe(const VFieldExpr& Z, double a, double b, const MapExpr& F,
                                                    const SamplePlan& plan, int jobs = 1, double tol = 1e-11,
                                                    const Thresholds& th = {}) {
  if (!detail::compatible(F.chart, Z.chart)) throw DimensionError("flow_commutation_probe: chart mismatch");
  const auto pts = sample_points(plan, F.chart);
  const double ts[2] = {a, b};
  std::vector<std::vector<detail::PointResidual>> res(2, std::vector<detail::PointResidual>(pts.size()));
  parallel_for(pts.size(), resolve_jobs(jobs), [&](std::size_t i) {
    for (int w = 0; w < 2; ++w) {
      try {
        const VectorXd lhs = evaluate(F, integrate_flow(Z, pts[i], ts[w], tol));
        const VectorXd rhs = integrate_flow(Z, evaluate(F, pts[i]), ts[w], tol);
        VectorXd diff = lhs - rhs;
        for (int r = 0; r < F.chart.s; ++r) diff(F.chart.k + r) = std::remainder(diff(F.chart.k + r), 2 * std::numbers::pi);
        const double raw = diff.norm();
        res[w][i] = {true, raw, raw / (1.0 + std::max(lhs.norm(), rhs.norm()))};
      } catch (const DomainError&) {
      }
    }
  });
  FlowCommutationReport out;
  out.flows.thresholds = th;
  out.flows.cases.push_back(detail::reduce_case("F", "Phi_a", res[0], pts, th));
  out.flows.cases.push_back(detail::reduce_case("F", "Phi_b", res[1], pts, th));
  out.flows.verdict = combine_verdicts(out.flows.cases);
  out.pushforward = check_automorphism(F, {Z}, plan, jobs, "F", {"Z"}, th);
  const Verdict u = out.flows.verdict, v = out.pushforward.verdict;
  out.consistent = u == v || u == Verdict::Inconclusive || v == Verdict::Inconclusive;
  return out;
}

// ---------------------------------------------------------------------------
// Linearity
// ---------------------------------------------------------------------------

/// Relative error of the least-squares linear fit F(p) ~ M p over the points:
/// sqrt(sum |F(p) - M p|^2 / sum |F(p)|^2).
inline double linear_fit_error(const MapExpr& F, const std::vector<VectorXd>& pts) {
  if (pts.empty()) throw PreconditionError("linear_fit_error: no points");
  const int n = F.dim();
  MatrixXd P(static_cast<Eigen::Index>(pts.size()), n), Q(static_cast<Eigen::Index>(pts.size()), n);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    P.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    Q.row(static_cast<Eigen::Index>(i)) = evaluate(F, pts[i]).transpose();
  }
  const MatrixXd Mt = P.colPivHouseholderQr().solve(Q);
  return (Q - P * Mt).norm() / Q.norm();
}

// ---------------------------------------------------------------------------
// Hopf-twist demonstration
// ---------------------------------------------------------------------------

struct CounterexampleReport {
  int n = 2;
  int invariant_dimension = 0;
  ResidualReport invariant_fields;  // lambda against the invariant basis on the annulus
  ResidualReport xi_and_Y;          // lambda against xi and Y
  double linear_fit_error = 0.0;    // on supp(mu)
  int support_points = 0;
  bool preserves = false;
  bool nonlinear = false;
  bool ok() const { return preserves && nonlinear; }
};

/// Points of the annulus 0.5 < |x| < 3 where mu(u(x)) != 0.
inline std::vector<VectorXd> hopf_support_points(const Expr& mu, int count, std::uint64_t seed) {
  const auto u = hopf_chart_coordinates();
  const Expr m = substitute(mu, {u[0], u[1]});
  std::vector<VectorXd> pts;
  const SamplePlan plan = SamplePlan::annulus(0.5, 3.0, 1, seed);
  for (std::size_t i = 0; pts.size() < static_cast<std::size_t>(count); ++i) {
    if (i > 1000000) throw NumericError("hopf_support_points: support too small to sample");
    const VectorXd p = sample_point(plan, Chart::euclidean(4), i);
    try {
      if (evaluate(m, Chart::euclidean(4), p) != 0.0) pts.push_back(p);
    } catch (const DomainError&) {
    }
  }
  return pts;
}

/// lambda preserves the degree <= d invariant fields of U(2) and xi, Y, yet
/// is not linear on the support of mu.
inline CounterexampleReport hopf_counterexample(int n, std::uint64_t seed, int jobs = 1, int degree = 5,
                                                const Expr& mu = default_hopf_mu()) {
  if (n == 1)
    throw PreconditionError("counterexample: U(1) acts freely on R^2 \\ {0}, so no invariant-field family can fail to determine it");
  if (n != 2) throw PreconditionError("counterexample: only n = 2 is supported");
  CounterexampleReport rep;
  rep.n = n;
  const MapExpr lambda = hopf_twist(mu);
  const InvariantSpace inv = invariant_field_space(make_group(Family::U, 2), degree);
  rep.invariant_dimension = inv.dimension;
  // Fields are re-homed on the punctured chart of lambda.
  const Chart pc = lambda.chart;
  std::vector<VFieldExpr> fields;
  std::vector<std::string> names;
  for (std::size_t b = 0; b < inv.basis.size(); ++b) {
    fields.emplace_back(pc, inv.basis[b].components);
    names.push_back("inv" + std::to_string(b));
  }
  Thresholds th;
  th.preserve_tol = 1e-7;
  rep.invariant_fields = check_automorphism(lambda, fields, SamplePlan::annulus(0.5, 3.0, 200, seed), jobs, "lambda", names, th);
  const VFieldExpr xi(pc, radial(4).components), Y(pc, complex_structure_field(2).components);
  rep.xi_and_Y = check_automorphism(lambda, {xi, Y}, SamplePlan::annulus(0.5, 3.0, 200, seed + 1), jobs, "lambda",
                                    {"xi", "Y"});
  const auto supp = hopf_support_points(mu, 400, seed + 2);
  rep.support_points = static_cast<int>(supp.size());
  rep.linear_fit_error = linear_fit_error(lambda, supp);
  rep.preserves = rep.invariant_fields.max() < 1e-7 && rep.xi_and_Y.max() < 1e-9 &&
                  rep.invariant_fields.verdict == Verdict::Preserves && rep.xi_and_Y.verdict == Verdict::Preserves;
  rep.nonlinear = rep.linear_fit_error > 1e-2;
  return rep;
}

}  // namespace detvec

#endif  // DETVEC_AUTCHECK_HPP
