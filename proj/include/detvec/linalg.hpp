#ifndef DETVEC_LINALG_HPP
#define DETVEC_LINALG_HPP

// Dense linear-algebra helpers shared by every module: rank decisions,
// nullspaces, canonical row-echelon bases and complex-to-real embedding.
// All rank decisions use one scale-free cutoff: sigma <= kRankTol * sigma_max.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace detvec {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

inline constexpr double kRankTol = 1e-9;

namespace detail {

// Singular values of A; tall inputs are first compressed by a QR step so the
// SVD only ever sees an n x n triangle.
inline VectorXd singular_values(const MatrixXd& a) {
  if (a.size() == 0) return VectorXd();
  MatrixXd work = a;
  if (a.rows() > 2 * a.cols()) {
    Eigen::HouseholderQR<MatrixXd> qr(a);
    work = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  }
  if (std::min(work.rows(), work.cols()) <= 800) return Eigen::JacobiSVD<MatrixXd>(work).singularValues();
  return Eigen::BDCSVD<MatrixXd>(work).singularValues();
}

}  // namespace detail

inline int numerical_rank(const MatrixXd& a, double rel_tol = kRankTol) {
  const VectorXd sv = detail::singular_values(a);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_tol * sv(0);
  return static_cast<int>((sv.array() > cut).count());
}

/// Orthonormal basis (as columns) of the right nullspace of A.
inline MatrixXd nullspace(const MatrixXd& a, double rel_tol = kRankTol) {
  const Eigen::Index n = a.cols();
  if (n == 0) return MatrixXd(0, 0);
  if (a.rows() == 0) return MatrixXd::Identity(n, n);
  MatrixXd work = a;
  if (a.rows() > 2 * n) {
    Eigen::HouseholderQR<MatrixXd> qr(a);
    work = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  }
  auto from = [&](const auto& svd) -> MatrixXd {
    const VectorXd& sv = svd.singularValues();
    int rank = 0;
    if (sv.size() > 0 && sv(0) > 0.0) {
      const double cut = rel_tol * sv(0);
      rank = static_cast<int>((sv.array() > cut).count());
    }
    return svd.matrixV().rightCols(n - rank);
  };
  // BDCSVD in Eigen 3.4.0 can return inaccurate vectors on sparse structured
  // input; Jacobi is used up to moderate sizes and as the fallback.
  if (n <= 800) return from(Eigen::JacobiSVD<MatrixXd>(work, Eigen::ComputeFullV));
  Eigen::BDCSVD<MatrixXd> bdc(work, Eigen::ComputeFullV);
  MatrixXd null = from(bdc);
  const double smax = bdc.singularValues().size() > 0 ? bdc.singularValues()(0) : 0.0;
  if (null.cols() == 0 || (work * null).norm() <= 1e-8 * std::max(smax, 1.0)) return null;
  return from(Eigen::JacobiSVD<MatrixXd>(work, Eigen::ComputeFullV));
}

/// Reduced row-echelon form of the row space of `rows` (each row one
/// vector). Pivots are taken left to right, so the result is a canonical,
/// deterministic basis of the span. Entries below `chop` are set to zero.
inline MatrixXd rref_rows(MatrixXd m, double chop = 1e-11) {
  const Eigen::Index nr = m.rows(), nc = m.cols();
  if (nr == 0) return m;
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < nc && row < nr; ++col) {
    Eigen::Index piv = row;
    double best = std::abs(m(row, col));
    for (Eigen::Index r = row + 1; r < nr; ++r) {
      if (std::abs(m(r, col)) > best) {
        best = std::abs(m(r, col));
        piv = r;
      }
    }
    if (best <= kRankTol * scale) continue;
    m.row(row).swap(m.row(piv));
    m.row(row) /= m(row, col);
    for (Eigen::Index r = 0; r < nr; ++r) {
      if (r != row && m(r, col) != 0.0) m.row(r) -= m(r, col) * m.row(row);
    }
    ++row;
  }
  m.conservativeResize(row, nc);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (std::abs(m.data()[i]) < chop) m.data()[i] = 0.0;
  }
  return m;
}

/// Snap a coefficient to a nearby simple fraction p/q (q <= 12) when it is
/// within `tol` of one. Used only to make printed bases readable.
inline double snap_simple(double v, double tol = 1e-9) {
  for (int q = 1; q <= 12; ++q) {
    const double p = std::round(v * q);
    if (std::abs(v - p / q) < tol) return p / q;
  }
  return v;
}

/// True when the column spans of A and B coincide (mutual containment).
inline bool same_column_span(const MatrixXd& a, const MatrixXd& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("same_column_span: row mismatch");
  const int ra = a.cols() ? numerical_rank(a) : 0;
  const int rb = b.cols() ? numerical_rank(b) : 0;
  if (ra != rb) return false;
  if (ra == 0) return true;
  MatrixXd ab(a.rows(), a.cols() + b.cols());
  ab << a, b;
  return numerical_rank(ab) == ra;
}

/// Real 2n x 2n image of a complex n x n matrix under z_j = x_{2j-1} + i x_{2j}.
inline MatrixXd realify(const MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  MatrixXd r(2 * n, 2 * m.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double a = m(i, j).real(), b = m(i, j).imag();
      r(2 * i, 2 * j) = a;
      r(2 * i, 2 * j + 1) = -b;
      r(2 * i + 1, 2 * j) = b;
      r(2 * i + 1, 2 * j + 1) = a;
    }
  }
  return r;
}

/// Stack real and imaginary parts of a complex matrix into one real vector.
inline VectorXd flatten_real(const MatrixXcd& m) {
  VectorXd v(2 * m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    v(2 * i) = m.data()[i].real();
    v(2 * i + 1) = m.data()[i].imag();
  }
  return v;
}

}  // namespace detvec

#endif  // DETVEC_LINALG_HPP
