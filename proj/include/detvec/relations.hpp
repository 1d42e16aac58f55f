#ifndef DETVEC_RELATIONS_HPP
#define DETVEC_RELATIONS_HPP

// Integer-relation search for real frequency vectors: finds integer vectors m
// with m . u_j ~ 0 for every given u_j, via LLL reduction of the usual
// embedding lattice. The answer is "relation found" or "none found up to the
// bound"; a failed search never proves irrationality.

#include "detvec/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace detvec {

struct RelationSearch {
  std::vector<std::vector<std::int64_t>> relations;  // independent relations found
  std::int64_t bound = 0;                            // effective search bound used
  int span_rank = 0;                                 // rank of the input columns
};

namespace detail {

using ld = long double;

inline void lll_reduce(std::vector<std::vector<ld>>& b, ld delta = 0.75L) {
  const std::size_t n = b.size();
  if (n < 2) return;
  const std::size_t dim = b[0].size();
  auto dot = [dim](const std::vector<ld>& x, const std::vector<ld>& y) {
    ld s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += x[i] * y[i];
    return s;
  };
  std::vector<std::vector<ld>> bs(n, std::vector<ld>(dim));
  std::vector<std::vector<ld>> mu(n, std::vector<ld>(n, 0));
  std::vector<ld> norms(n);
  auto gram_schmidt = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      bs[i] = b[i];
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = norms[j] > 0 ? dot(b[i], bs[j]) / norms[j] : 0;
        for (std::size_t t = 0; t < dim; ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
      norms[i] = dot(bs[i], bs[i]);
    }
  };
  gram_schmidt();
  std::size_t k = 1;
  int guard = 0;
  while (k < n && guard++ < 100000) {
    for (std::size_t j = k; j-- > 0;) {
      const ld q = std::round(mu[k][j]);
      if (q != 0) {
        for (std::size_t t = 0; t < dim; ++t) b[k][t] -= q * b[j][t];
        gram_schmidt();
      }
    }
    if (norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt();
      k = k > 1 ? k - 1 : 1;
    }
  }
}

}  // namespace detail

/// Search for integer vectors m (|m|_inf <= bound) annihilating every column
/// of `cols` (s x c). Columns are normalised to unit max-norm and a relation
/// is accepted when |m . u_j| <= tol for all j. For s >= c + 2 the bound is
/// capped so that Dirichlet-type near-relations cannot pass the tolerance.
inline RelationSearch integer_relations(const MatrixXd& cols, std::int64_t bound = 1000000,
                                        double tol = 1e-9) {
  RelationSearch out;
  const Eigen::Index s = cols.rows();
  std::vector<VectorXd> u;
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    const double mx = cols.col(j).cwiseAbs().maxCoeff();
    if (mx > 0) u.push_back(cols.col(j) / mx);
  }
  if (u.empty()) {
    // Everything annihilates the zero span: the unit vectors are relations.
    for (Eigen::Index i = 0; i < s; ++i) {
      std::vector<std::int64_t> m(s, 0);
      m[i] = 1;
      out.relations.push_back(m);
    }
    out.bound = bound;
    return out;
  }
  MatrixXd um(s, static_cast<Eigen::Index>(u.size()));
  for (std::size_t j = 0; j < u.size(); ++j) um.col(static_cast<Eigen::Index>(j)) = u[j];
  const int c = numerical_rank(um);
  out.span_rank = c;
  if (c >= s) {
    out.bound = bound;
    return out;
  }
  double eff = static_cast<double>(bound);
  const double expo = static_cast<double>(c) / static_cast<double>(s - c);
  eff = std::min(eff, std::floor(0.1 * std::pow(tol, -expo)));
  out.bound = static_cast<std::int64_t>(std::max(1.0, eff));

  using detail::ld;
  const ld weight = static_cast<ld>(out.bound) / static_cast<ld>(tol);
  const std::size_t dim = static_cast<std::size_t>(s) + u.size();
  std::vector<std::vector<ld>> basis(static_cast<std::size_t>(s), std::vector<ld>(dim, 0));
  for (Eigen::Index i = 0; i < s; ++i) {
    basis[i][i] = 1;
    for (std::size_t j = 0; j < u.size(); ++j) basis[i][s + j] = weight * static_cast<ld>(u[j](i));
  }
  detail::lll_reduce(basis);

  MatrixXd accepted(s, 0);
  for (const auto& v : basis) {
    std::vector<std::int64_t> m(static_cast<std::size_t>(s));
    ld maxabs = 0;
    bool zero = true;
    for (Eigen::Index i = 0; i < s; ++i) {
      const ld r = std::round(v[i]);
      m[i] = static_cast<std::int64_t>(r);
      maxabs = std::max(maxabs, std::fabs(r));
      if (m[i] != 0) zero = false;
    }
    if (zero || maxabs > static_cast<ld>(out.bound)) continue;
    bool ok = true;
    for (const auto& uj : u) {
      ld acc = 0;
      for (Eigen::Index i = 0; i < s; ++i) acc += static_cast<ld>(m[i]) * static_cast<ld>(uj(i));
      if (std::fabs(acc) > static_cast<ld>(tol)) ok = false;
    }
    if (!ok) continue;
    MatrixXd trial(s, accepted.cols() + 1);
    trial << accepted, Eigen::Map<const Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>>(m.data(), s).cast<double>();
    if (numerical_rank(trial) == trial.cols()) {
      accepted = trial;
      out.relations.push_back(m);
    }
  }
  return out;
}

/// Dimension over Q of span{v_1, ..., v_s} as far as the bounded search can tell.
inline int rational_rank(const VectorXd& v, std::int64_t bound = 1000000, double tol = 1e-9) {
  if (v.cwiseAbs().maxCoeff() == 0.0) return 0;
  const RelationSearch r = integer_relations(v, bound, tol);
  return static_cast<int>(v.size()) - static_cast<int>(r.relations.size());
}

}  // namespace detvec

#endif  // DETVEC_RELATIONS_HPP
