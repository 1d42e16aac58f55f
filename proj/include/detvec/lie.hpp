#ifndef DETVEC_LIE_HPP
#define DETVEC_LIE_HPP

// Compact matrix Lie groups and their Lie algebras.
//
// Every group is stored through complex matrices. Complex families (U, SU,
// Torus) act on C^n, which is identified with R^{2n} through
// z_j = x_{2j-1} + i x_{2j}; multiplication by i is then the complex
// structure J of R^{2n}. Real families (SO, O, Sp) carry zero imaginary parts.
// Sp(r) lives in SO(4r) as the commutant of the quaternionic structures
// J, K, L.

#include "detvec/errors.hpp"
#include "detvec/linalg.hpp"
#include "detvec/random.hpp"
#include "detvec/relations.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace detvec {

enum class Family { SO, O, SU, U, Sp, Torus, ProductRT };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::SO: return "SO";
    case Family::O: return "O";
    case Family::SU: return "SU";
    case Family::U: return "U";
    case Family::Sp: return "Sp";
    case Family::Torus: return "Torus";
    case Family::ProductRT: return "ProductRT";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  if (s == "SO") return Family::SO;
  if (s == "O") return Family::O;
  if (s == "SU") return Family::SU;
  if (s == "U") return Family::U;
  if (s == "Sp") return Family::Sp;
  if (s == "Torus" || s == "T") return Family::Torus;
  if (s == "ProductRT") return Family::ProductRT;
  throw PreconditionError("unknown group family '" + std::string(s) + "'");
}

struct GroupId {
  Family family = Family::SO;
  int param = 1;
  friend bool operator==(const GroupId&, const GroupId&) = default;
};

inline std::string to_string(const GroupId& g) {
  return to_string(g.family) + "(" + std::to_string(g.param) + ")";
}

/// Complex structure of R^{2n}: J e_{2j-1} = e_{2j}, J e_{2j} = -e_{2j-1}.
inline MatrixXd complex_structure(int n) {
  MatrixXd j = MatrixXd::Zero(2 * n, 2 * n);
  for (int b = 0; b < n; ++b) {
    j(2 * b + 1, 2 * b) = 1.0;
    j(2 * b, 2 * b + 1) = -1.0;
  }
  return j;
}

/// The three quaternionic structures J, K, L of R^{4r} with JK = L.
inline std::array<MatrixXd, 3> quaternionic_structures(int r) {
  const int n = 4 * r;
  MatrixXd j = MatrixXd::Zero(n, n), k = MatrixXd::Zero(n, n), l = MatrixXd::Zero(n, n);
  for (int b = 0; b < r; ++b) {
    const int o = 4 * b;  // 0-based index of e_{4l-3}
    j(o + 1, o) = 1;
    j(o, o + 1) = -1;
    j(o + 3, o + 2) = 1;
    j(o + 2, o + 3) = -1;
    k(o + 2, o) = 1;
    k(o + 3, o + 1) = -1;
    k(o, o + 2) = -1;
    k(o + 1, o + 3) = 1;
    l(o + 3, o) = 1;
    l(o + 2, o + 1) = 1;
    l(o + 1, o + 2) = -1;
    l(o, o + 3) = -1;
  }
  return {j, k, l};
}

class GroupSpec {
 public:
  GroupId id;
  int matrix_dim = 0;
  int algebra_dim = 0;
  bool is_complex = false;
  std::vector<MatrixXcd> algebra_basis;
  /// Real representatives of the non-identity components (only O(n)).
  std::vector<MatrixXd> component_reps;

  /// Dimension of the real representation space.
  int real_dim() const { return is_complex ? 2 * matrix_dim : matrix_dim; }
  bool abelian() const {
    return id.family == Family::Torus || id.family == Family::ProductRT ||
           ((id.family == Family::SO || id.family == Family::O) && id.param == 2) ||
           (id.family == Family::U && id.param == 1);
  }
};

/// Known dimension of the Lie algebra of each family.
inline int expected_algebra_dim(const GroupId& g) {
  const int p = g.param;
  switch (g.family) {
    case Family::SO:
    case Family::O: return p * (p - 1) / 2;
    case Family::SU: return p * p - 1;
    case Family::U: return p * p;
    case Family::Sp: return p * (2 * p + 1);
    case Family::Torus:
    case Family::ProductRT: return p;
  }
  return 0;
}

struct AlgebraElement {
  GroupId group;
  MatrixXcd matrix;
};

struct GroupElement {
  GroupId group;
  MatrixXcd matrix;
};

namespace detail {

inline MatrixXcd real_to_c(const MatrixXd& m) { return m.cast<cplx>(); }

inline double norm_fro(const MatrixXcd& m) { return m.norm(); }

inline std::vector<MatrixXcd> sp_algebra_basis(int r) {
  const int n = 4 * r;
  const auto q = quaternionic_structures(r);
  // Project each so(n) generator onto the commutant of J, K, L (group average
  // over {1, J, K, L}) and keep a canonical basis of the span.
  MatrixXd rows(n * (n - 1) / 2, n * n);
  int idx = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      MatrixXd e = MatrixXd::Zero(n, n);
      e(a, b) = -1;
      e(b, a) = 1;
      MatrixXd p = 0.25 * (e - q[0] * e * q[0] - q[1] * e * q[1] - q[2] * e * q[2]);
      rows.row(idx++) = Eigen::Map<const VectorXd>(p.data(), n * n).transpose();
    }
  }
  const MatrixXd red = rref_rows(rows);
  std::vector<MatrixXcd> basis;
  for (Eigen::Index i = 0; i < red.rows(); ++i) {
    VectorXd v = red.row(i).transpose();
    basis.push_back(Eigen::Map<const MatrixXd>(v.data(), n, n).cast<cplx>());
  }
  return basis;
}

}  // namespace detail

inline GroupSpec make_group(Family family, int param) {
  if (param < 1) throw PreconditionError("group parameter must be positive");
  GroupSpec g;
  g.id = {family, param};
  const cplx I(0.0, 1.0);
  switch (family) {
    case Family::SO:
    case Family::O: {
      const int n = param;
      g.matrix_dim = n;
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          MatrixXcd e = MatrixXcd::Zero(n, n);
          e(a, b) = -1.0;
          e(b, a) = 1.0;
          g.algebra_basis.push_back(e);
        }
      }
      if (family == Family::O) {
        MatrixXd refl = MatrixXd::Identity(n, n);
        refl(0, 0) = -1.0;
        g.component_reps.push_back(refl);
      }
      break;
    }
    case Family::U:
    case Family::SU: {
      const int n = param;
      g.matrix_dim = n;
      g.is_complex = true;
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          MatrixXcd e = MatrixXcd::Zero(n, n);
          e(a, b) = -1.0;
          e(b, a) = 1.0;
          g.algebra_basis.push_back(e);
          MatrixXcd f = MatrixXcd::Zero(n, n);
          f(a, b) = I;
          f(b, a) = I;
          g.algebra_basis.push_back(f);
        }
      }
      if (family == Family::U) {
        for (int a = 0; a < n; ++a) {
          MatrixXcd d = MatrixXcd::Zero(n, n);
          d(a, a) = I;
          g.algebra_basis.push_back(d);
        }
      } else {
        for (int a = 0; a + 1 < n; ++a) {
          MatrixXcd d = MatrixXcd::Zero(n, n);
          d(a, a) = I;
          d(a + 1, a + 1) = -I;
          g.algebra_basis.push_back(d);
        }
      }
      break;
    }
    case Family::Sp: {
      g.matrix_dim = 4 * param;
      g.algebra_basis = detail::sp_algebra_basis(param);
      break;
    }
    case Family::Torus:
    case Family::ProductRT: {
      const int s = param;
      g.matrix_dim = s;
      g.is_complex = true;
      for (int a = 0; a < s; ++a) {
        MatrixXcd d = MatrixXcd::Zero(s, s);
        d(a, a) = I;
        g.algebra_basis.push_back(d);
      }
      break;
    }
  }
  g.algebra_dim = static_cast<int>(g.algebra_basis.size());
  return g;
}

/// Matrix acting on the real representation space R^{real_dim}.
inline MatrixXd real_rep(const GroupSpec& spec, const MatrixXcd& m) {
  return spec.is_complex ? realify(m) : MatrixXd(m.real());
}

/// Residual of the family's defining linear constraints on the algebra.
inline double algebra_residual(const GroupSpec& spec, const MatrixXcd& a) {
  if (a.rows() != spec.matrix_dim || a.cols() != spec.matrix_dim) return INFINITY;
  const MatrixXcd skew = a + a.adjoint();
  double r = skew.norm();
  switch (spec.id.family) {
    case Family::SO:
    case Family::O: r += a.imag().norm(); break;
    case Family::U: break;
    case Family::SU: r += std::abs(a.trace()); break;
    case Family::Sp: {
      r += a.imag().norm();
      const auto q = quaternionic_structures(spec.id.param);
      const MatrixXd ar = a.real();
      for (const auto& s : q) r += (ar * s - s * ar).norm();
      break;
    }
    case Family::Torus:
    case Family::ProductRT: {
      MatrixXcd off = a;
      off.diagonal().setZero();
      r += off.norm() + a.diagonal().real().norm();
      break;
    }
  }
  return r;
}

/// Membership residual: ||g* g - I|| plus determinant and structure terms.
inline double membership_residual(const GroupSpec& spec, const MatrixXcd& g) {
  const int n = spec.matrix_dim;
  if (g.rows() != n || g.cols() != n) return INFINITY;
  double r = (g.adjoint() * g - MatrixXcd::Identity(n, n)).norm();
  const cplx det = g.determinant();
  switch (spec.id.family) {
    case Family::SO: r += g.imag().norm() + std::abs(det - 1.0); break;
    case Family::O: r += g.imag().norm() + std::abs(std::abs(det.real()) - 1.0) + std::abs(det.imag()); break;
    case Family::U: break;
    case Family::SU: r += std::abs(det - 1.0); break;
    case Family::Sp: {
      r += g.imag().norm() + std::abs(det - 1.0);
      const auto q = quaternionic_structures(spec.id.param);
      const MatrixXd gr = g.real();
      for (const auto& s : q) r += (gr * s - s * gr).norm();
      break;
    }
    case Family::Torus:
    case Family::ProductRT: {
      MatrixXcd off = g;
      off.diagonal().setZero();
      r += off.norm();
      break;
    }
  }
  return r;
}

inline void require_same_group(const GroupId& a, const GroupId& b) {
  if (!(a == b)) throw DimensionError("group mismatch: " + to_string(a) + " vs " + to_string(b));
}

/// Wraps a matrix as an algebra element after checking the family constraints.
inline AlgebraElement make_algebra_element(const GroupSpec& spec, const MatrixXcd& m, double tol = 1e-10) {
  if (m.rows() != spec.matrix_dim || m.cols() != spec.matrix_dim)
    throw DimensionError("algebra element must be " + std::to_string(spec.matrix_dim) + "x" +
                         std::to_string(spec.matrix_dim));
  const double res = algebra_residual(spec, m);
  if (!(res <= tol * std::max(1.0, m.norm())))
    throw PreconditionError("matrix is not in the Lie algebra of " + to_string(spec.id));
  return {spec.id, m};
}

/// Linear combination of the spec's algebra basis.
inline AlgebraElement algebra_from_coords(const GroupSpec& spec, const VectorXd& coords) {
  if (coords.size() != spec.algebra_dim) throw DimensionError("coordinate count != algebra dimension");
  MatrixXcd m = MatrixXcd::Zero(spec.matrix_dim, spec.matrix_dim);
  for (int i = 0; i < spec.algebra_dim; ++i) m += coords(i) * spec.algebra_basis[i];
  return {spec.id, m};
}

/// Torus algebra element diag(i w_1, ..., i w_s) from a frequency vector.
inline AlgebraElement torus_element(const GroupSpec& spec, const VectorXd& freq) {
  if (spec.id.family != Family::Torus && spec.id.family != Family::ProductRT)
    throw PreconditionError("torus_element needs a torus group");
  return algebra_from_coords(spec, freq);
}

/// Frequency vector of a torus algebra element.
inline VectorXd torus_frequencies(const AlgebraElement& a) { return a.matrix.diagonal().imag(); }

// ---------------------------------------------------------------------------
// Exponential: scaling and squaring around a degree-13 Pade approximant.
// ---------------------------------------------------------------------------

inline MatrixXcd expm(const MatrixXcd& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix must be square");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  const MatrixXcd as = a / std::ldexp(1.0, s);
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  const MatrixXcd a2 = as * as, a4 = a2 * a2, a6 = a4 * a2;
  const MatrixXcd u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const MatrixXcd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  MatrixXcd r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

inline GroupElement exp_matrix(const GroupSpec& spec, const AlgebraElement& a) {
  require_same_group(spec.id, a.group);
  if (a.matrix.rows() != spec.matrix_dim || a.matrix.cols() != spec.matrix_dim)
    throw DimensionError("exp_matrix: dimension mismatch");
  MatrixXcd g = expm(a.matrix);
  if (!spec.is_complex) g = g.real().cast<cplx>();
  return {spec.id, g};
}

inline GroupElement identity_element(const GroupSpec& spec) {
  return {spec.id, MatrixXcd::Identity(spec.matrix_dim, spec.matrix_dim)};
}

// ---------------------------------------------------------------------------
// Haar sampling: orthonormalised Gaussian matrices with the triangular
// factor's diagonal phases divided out. Sp(r) uses the polar factor of a
// Gaussian quaternion-linear matrix.
// ---------------------------------------------------------------------------

namespace detail {

inline MatrixXd haar_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  MatrixXd z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = nd(rng);
  Eigen::HouseholderQR<MatrixXd> qr(z);
  MatrixXd q = qr.householderQ();
  const MatrixXd& r = qr.matrixQR();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  return q;
}

inline MatrixXcd haar_unitary(int n, Rng& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  MatrixXcd z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = nd(rng);
      const double im = nd(rng);
      z(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<MatrixXcd> qr(z);
  MatrixXcd q = qr.householderQ();
  const MatrixXcd& r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

inline MatrixXd haar_symplectic(int r, Rng& rng) {
  const int n = 4 * r;
  const auto q = quaternionic_structures(r);
  std::normal_distribution<double> nd(0.0, 1.0);
  MatrixXd z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = nd(rng);
  const MatrixXd p = 0.25 * (z - q[0] * z * q[0] - q[1] * z * q[1] - q[2] * z * q[2]);
  Eigen::JacobiSVD<MatrixXd> svd(p, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace detail

/// Haar-distributed element drawn from the given stream.
inline GroupElement haar_sample(const GroupSpec& spec, Rng& rng) {
  const int p = spec.id.param;
  switch (spec.id.family) {
    case Family::O: return {spec.id, detail::haar_orthogonal(p, rng).cast<cplx>()};
    case Family::SO: {
      MatrixXd q = detail::haar_orthogonal(p, rng);
      if (q.determinant() < 0) q.col(0) *= -1.0;
      return {spec.id, q.cast<cplx>()};
    }
    case Family::U: return {spec.id, detail::haar_unitary(p, rng)};
    case Family::SU: {
      MatrixXcd u = detail::haar_unitary(p, rng);
      const cplx det = u.determinant();
      u *= std::pow(det, -1.0 / p);
      return {spec.id, u};
    }
    case Family::Sp: return {spec.id, detail::haar_symplectic(p, rng).cast<cplx>()};
    case Family::Torus:
    case Family::ProductRT: {
      std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
      MatrixXcd d = MatrixXcd::Zero(p, p);
      for (int i = 0; i < p; ++i) d(i, i) = std::polar(1.0, ud(rng));
      return {spec.id, d};
    }
  }
  throw PreconditionError("haar_sample: unsupported family");
}

/// Deterministic Haar sample for (seed, index = 0).
inline GroupElement haar_sample(const GroupSpec& spec, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return haar_sample(spec, rng);
}

// ---------------------------------------------------------------------------
// Algebra structure
// ---------------------------------------------------------------------------

inline AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_group(a.group, b.group);
  if (a.matrix.rows() != b.matrix.rows()) throw DimensionError("bracket: dimension mismatch");
  return {a.group, a.matrix * b.matrix - b.matrix * a.matrix};
}

/// Dimension of the smallest bracket-closed subspace containing all inputs.
inline int generated_subalgebra_dim(const std::vector<AlgebraElement>& gens) {
  if (gens.empty()) return 0;
  for (const auto& g : gens) require_same_group(gens[0].group, g.group);
  std::vector<MatrixXcd> span;
  MatrixXd cols(2 * gens[0].matrix.size(), 0);
  auto try_add = [&](const MatrixXcd& m) {
    if (m.norm() == 0.0) return false;
    MatrixXd trial(cols.rows(), cols.cols() + 1);
    trial << cols, flatten_real(m);
    if (numerical_rank(trial) > cols.cols()) {
      cols = trial;
      span.push_back(m);
      return true;
    }
    return false;
  };
  for (const auto& g : gens) try_add(g.matrix);
  // Close under brackets until no new direction appears.
  std::size_t done = 0;
  while (done < span.size()) {
    const std::size_t n = span.size();
    for (std::size_t i = done; i < n; ++i)
      for (std::size_t j = 0; j < span.size(); ++j) {
        const MatrixXcd c = span[i] * span[j] - span[j] * span[i];
        if (c.norm() > 1e-14 * (1.0 + span[i].norm() * span[j].norm())) try_add(c);
      }
    done = n;
  }
  return static_cast<int>(span.size());
}

inline int generated_subalgebra_dim(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_group(a.group, b.group);
  return generated_subalgebra_dim(std::vector<AlgebraElement>{a, b});
}

enum class Density { Dense, NotDense, ProbablyDense };

inline std::string to_string(Density d) {
  switch (d) {
    case Density::Dense: return "Dense";
    case Density::NotDense: return "NotDense";
    case Density::ProbablyDense: return "ProbablyDense";
  }
  return "?";
}

/// Is the connected subgroup generated by exp(span{A, B}) dense in G?
/// Abelian tori are decided by an integer-relation search on the frequency
/// vectors; for the other families (compact, with [g,g] + centre = g) density
/// holds exactly when the generated subalgebra is all of g.
inline Density is_dense_couple(const GroupSpec& spec, const AlgebraElement& a, const AlgebraElement& b,
                               std::int64_t search_bound = 1000000) {
  require_same_group(spec.id, a.group);
  require_same_group(spec.id, b.group);
  if (spec.id.family == Family::Torus || spec.id.family == Family::ProductRT) {
    MatrixXd cols(spec.matrix_dim, 2);
    cols.col(0) = torus_frequencies(a);
    cols.col(1) = torus_frequencies(b);
    if (numerical_rank(cols) == spec.matrix_dim) return Density::Dense;
    const RelationSearch rs = integer_relations(cols, search_bound);
    return rs.relations.empty() ? Density::ProbablyDense : Density::NotDense;
  }
  return generated_subalgebra_dim(a, b) == spec.algebra_dim ? Density::Dense : Density::NotDense;
}

inline AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& a) {
  require_same_group(g.group, a.group);
  if (g.matrix.rows() != a.matrix.rows()) throw DimensionError("adjoint: dimension mismatch");
  Eigen::FullPivLU<MatrixXcd> lu(g.matrix);
  if (!lu.isInvertible()) throw NumericError("adjoint: singular group element (corrupted input)");
  // g^{-1} = g* for every family here; the LU solve keeps this honest for
  // slightly perturbed inputs.
  return {a.group, g.matrix * a.matrix * lu.inverse()};
}

/// Basis of {A in g : A x = 0} for x in the standard representation
/// (C^n for complex families, R^n otherwise).
inline std::vector<AlgebraElement> isotropy_algebra(const GroupSpec& spec, const VectorXcd& x) {
  if (x.size() != spec.matrix_dim) throw DimensionError("isotropy_algebra: point dimension mismatch");
  const int d = spec.algebra_dim;
  MatrixXd sys(2 * spec.matrix_dim, d);
  for (int i = 0; i < d; ++i) sys.col(i) = flatten_real(spec.algebra_basis[i] * x);
  MatrixXd null;
  if (x.norm() == 0.0) {
    null = MatrixXd::Identity(d, d);
  } else {
    const double scale = x.norm();
    null = nullspace(sys / scale);
  }
  std::vector<AlgebraElement> out;
  if (null.cols() == 0) return out;
  const MatrixXd canon = rref_rows(null.transpose());
  for (Eigen::Index r = 0; r < canon.rows(); ++r) out.push_back(algebra_from_coords(spec, canon.row(r).transpose()));
  return out;
}

inline std::vector<AlgebraElement> isotropy_algebra(const GroupSpec& spec, const VectorXd& x) {
  return isotropy_algebra(spec, VectorXcd(x.cast<cplx>()));
}

/// Free-point test for SO(n) acting diagonally on n-1 vectors of R^n.
struct FreePointResult {
  bool free = false;
  int rank = 0;
  /// For n = 3: F(v) = (<v1,v1>, <v1,v2>) and the disc criterion x2^2 < x1(1 - x1).
  std::optional<std::array<double, 2>> image;
  std::optional<bool> interior;
};

inline FreePointResult is_free_point_E62(const std::vector<VectorXd>& vectors) {
  if (vectors.empty()) throw DimensionError("need n-1 vectors");
  const auto n = vectors.front().size();
  if (n < 3) throw DimensionError("need vectors in R^n with n >= 3");
  if (static_cast<Eigen::Index>(vectors.size()) != n - 1)
    throw DimensionError("need exactly n-1 vectors in R^n");
  MatrixXd m(n, n - 1);
  for (Eigen::Index j = 0; j < n - 1; ++j) {
    if (vectors[j].size() != n) throw DimensionError("vector dimension mismatch");
    m.col(j) = vectors[j];
  }
  FreePointResult r;
  r.rank = numerical_rank(m);
  r.free = r.rank == n - 1;
  if (n == 3) {
    const double x1 = vectors[0].dot(vectors[0]);
    const double x2 = vectors[0].dot(vectors[1]);
    r.image = std::array<double, 2>{x1, x2};
    r.interior = x2 * x2 < x1 * (1.0 - x1);
  }
  return r;
}

}  // namespace detvec

#endif  // DETVEC_LIE_HPP
