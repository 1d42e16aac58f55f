#include "detvec/lie.hpp"
#include "detvec/relations.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace detvec;

namespace {

// Oracle: truncated power series sum_{k<terms} A^k / k!.
MatrixXcd series_exp(const MatrixXcd& a, int terms = 30) {
  MatrixXcd sum = MatrixXcd::Identity(a.rows(), a.cols());
  MatrixXcd term = sum;
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

// Oracle: brute-force enumeration of integer relations with |m_i| <= n.
bool brute_force_relation(const VectorXd& v, int n, double tol) {
  const int s = static_cast<int>(v.size());
  std::vector<int> m(s, -n);
  for (;;) {
    bool nonzero = false;
    double dot = 0.0;
    for (int i = 0; i < s; ++i) {
      nonzero |= m[i] != 0;
      dot += m[i] * v(i);
    }
    if (nonzero && std::abs(dot) <= tol) return true;
    int i = 0;
    while (i < s && m[i] == n) m[i++] = -n;
    if (i == s) return false;
    ++m[i];
  }
}

MatrixXcd so3_generator(int axis) {
  MatrixXcd l = MatrixXcd::Zero(3, 3);
  const int a = (axis + 1) % 3, b = (axis + 2) % 3;
  l(b, a) = 1.0;
  l(a, b) = -1.0;
  return l;
}

AlgebraElement random_algebra(const GroupSpec& g, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n;
  VectorXd c(g.algebra_dim);
  for (auto& v : c) v = scale * n(rng);
  return algebra_from_coords(g, c);
}

const std::vector<std::pair<Family, int>> kFamilies{
    {Family::SO, 2}, {Family::SO, 3}, {Family::SO, 4}, {Family::O, 3},  {Family::SU, 2},
    {Family::SU, 3}, {Family::U, 1},  {Family::U, 2},  {Family::U, 3}, {Family::Sp, 1},
    {Family::Sp, 2}, {Family::Torus, 2}, {Family::Torus, 3}};

}  // namespace

TEST(GroupSpec, AlgebraDimensionsMatchFormulas) {
  for (const auto& [f, p] : kFamilies) {
    const GroupSpec g = make_group(f, p);
    EXPECT_EQ(g.algebra_dim, expected_algebra_dim(g.id)) << to_string(g.id);
    for (const auto& b : g.algebra_basis) EXPECT_LT(algebra_residual(g, b), 1e-12) << to_string(g.id);
  }
  EXPECT_EQ(make_group(Family::SO, 6).algebra_dim, 15);  // m(2m-1) with m = 3
  EXPECT_EQ(make_group(Family::Sp, 1).matrix_dim, 4);
}

TEST(GroupSpec, QuaternionicStructures) {
  const auto q = quaternionic_structures(2);
  const MatrixXd I = MatrixXd::Identity(8, 8);
  EXPECT_LT((q[0] * q[1] - q[2]).norm(), 1e-15);
  for (const auto& s : q) EXPECT_LT((s * s + I).norm(), 1e-15);
  EXPECT_LT((q[0] * q[1] + q[1] * q[0]).norm(), 1e-15);
  EXPECT_LT((q[1] * q[2] + q[2] * q[1]).norm(), 1e-15);
  EXPECT_LT((q[0] * q[2] + q[2] * q[0]).norm(), 1e-15);
  const auto q1 = quaternionic_structures(1);
  const VectorXd e1 = VectorXd::Unit(4, 0);
  EXPECT_EQ(q1[0] * e1, VectorXd::Unit(4, 1));
  EXPECT_EQ(q1[1] * e1, VectorXd::Unit(4, 2));
  EXPECT_EQ(q1[2] * e1, VectorXd::Unit(4, 3));
}

TEST(Exp, ZeroIsIdentity) {
  const GroupSpec g = make_group(Family::SU, 3);
  const GroupElement e = exp_matrix(g, make_algebra_element(g, MatrixXcd::Zero(3, 3)));
  EXPECT_LT((e.matrix - MatrixXcd::Identity(3, 3)).norm(), 1e-15);
}

TEST(Exp, QuarterTurn) {
  const GroupSpec g = make_group(Family::SO, 2);
  MatrixXcd a = MatrixXcd::Zero(2, 2);
  a(0, 1) = -std::numbers::pi / 2;
  a(1, 0) = std::numbers::pi / 2;
  const GroupElement r = exp_matrix(g, make_algebra_element(g, a));
  MatrixXcd expected(2, 2);
  expected << 0, -1, 1, 0;
  EXPECT_LT((r.matrix - expected).norm(), 1e-14);
  EXPECT_LT((r.matrix - series_exp(a)).norm(), 1e-13);
}

TEST(Exp, DiagonalPhasesGiveMinusIdentity) {
  const GroupSpec g = make_group(Family::U, 2);
  MatrixXcd a = MatrixXcd::Zero(2, 2);
  a(0, 0) = cplx(0, std::numbers::pi);
  a(1, 1) = cplx(0, -std::numbers::pi);
  const GroupElement r = exp_matrix(g, make_algebra_element(g, a));
  EXPECT_LT((r.matrix + MatrixXcd::Identity(2, 2)).norm(), 1e-14);
  EXPECT_LT((r.matrix - series_exp(a, 40)).norm(), 1e-12);
}

TEST(Exp, MatchesPowerSeriesAndStaysInGroup) {
  Rng rng(11);
  for (const auto& [f, p] : kFamilies) {
    const GroupSpec g = make_group(f, p);
    for (int t = 0; t < 10; ++t) {
      const AlgebraElement a = random_algebra(g, rng, 0.3);
      const GroupElement e = exp_matrix(g, a);
      EXPECT_LT(membership_residual(g, e.matrix), 1e-9) << to_string(g.id);
      EXPECT_LT((e.matrix - series_exp(a.matrix)).norm(), 1e-12) << to_string(g.id);
    }
  }
}

TEST(Exp, InverseProperty) {
  Rng rng(12);
  for (const auto& [f, p] : kFamilies) {
    const GroupSpec g = make_group(f, p);
    for (int t = 0; t < 10; ++t) {
      AlgebraElement a = random_algebra(g, rng);
      a.matrix *= 5.0 / std::max(1.0, a.matrix.norm());
      AlgebraElement na = a;
      na.matrix = -a.matrix;
      const MatrixXcd prod = exp_matrix(g, a).matrix * exp_matrix(g, na).matrix;
      EXPECT_LT((prod - MatrixXcd::Identity(g.matrix_dim, g.matrix_dim)).norm(), 1e-10) << to_string(g.id);
    }
  }
}

TEST(Exp, RejectsWrongShape) {
  const GroupSpec g = make_group(Family::SO, 3);
  EXPECT_THROW(make_algebra_element(g, MatrixXcd::Zero(2, 2)), DimensionError);
  EXPECT_THROW(make_algebra_element(g, MatrixXcd::Zero(3, 2)), DimensionError);
}

TEST(Haar, ContractAndDeterminism) {
  const GroupSpec so3 = make_group(Family::SO, 3);
  const GroupElement r = haar_sample(so3, 1);
  EXPECT_LT((r.matrix.adjoint() * r.matrix - MatrixXcd::Identity(3, 3)).norm(), 1e-12);
  EXPECT_NEAR(r.matrix.determinant().real(), 1.0, 1e-12);
  const GroupSpec u2 = make_group(Family::U, 2);
  EXPECT_EQ(haar_sample(u2, 7).matrix, haar_sample(u2, 7).matrix);
  const GroupSpec t2 = make_group(Family::Torus, 2);
  const MatrixXcd d = haar_sample(t2, 3).matrix;
  EXPECT_EQ(d(0, 1), cplx(0));
  EXPECT_EQ(d(1, 0), cplx(0));
  EXPECT_NEAR(std::abs(d(0, 0)), 1.0, 1e-15);
}

TEST(Haar, MembershipForEveryFamily) {
  for (const auto& [f, p] : kFamilies) {
    const GroupSpec g = make_group(f, p);
    Rng rng(99);
    for (int t = 0; t < 50; ++t) EXPECT_LT(membership_residual(g, haar_sample(g, rng).matrix), 1e-9) << to_string(g.id);
  }
}

TEST(Haar, LeftInvarianceOfTraceStatistic) {
  const GroupSpec g = make_group(Family::SO, 3);
  Rng fixed(5);
  const int n = 10000;
  for (int k = 0; k < 5; ++k) {
    const MatrixXd gk = haar_sample(g, fixed).matrix.real();
    Rng rng = make_rng(77, static_cast<std::uint64_t>(k));
    double s1 = 0, s2 = 0, q1 = 0, q2 = 0;
    for (int i = 0; i < n; ++i) {
      const MatrixXd h = haar_sample(g, rng).matrix.real();
      const double a = (gk * h).trace(), b = h.trace();
      s1 += a;
      q1 += a * a;
      s2 += b;
      q2 += b * b;
    }
    const double m1 = s1 / n, m2 = s2 / n;
    const double se = std::sqrt((q1 / n - m1 * m1) / n + (q2 / n - m2 * m2) / n);
    EXPECT_LT(std::abs(m1 - m2), 3.0 * se + 1e-12) << "g index " << k;
  }
}

TEST(Haar, SymplecticSamplesCommuteWithStructures) {
  const GroupSpec g = make_group(Family::Sp, 2);
  const auto q = quaternionic_structures(2);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const MatrixXd s = haar_sample(g, rng).matrix.real();
    for (const auto& m : q) EXPECT_LT((s * m - m * s).norm(), 1e-10);
  }
}

TEST(Bracket, ExamplesAndIdentities) {
  const GroupSpec so3 = make_group(Family::SO, 3);
  const AlgebraElement lx = make_algebra_element(so3, so3_generator(0));
  const AlgebraElement ly = make_algebra_element(so3, so3_generator(1));
  const AlgebraElement lz = make_algebra_element(so3, so3_generator(2));
  EXPECT_LT((bracket(lx, ly).matrix - lz.matrix).norm(), 1e-15);
  EXPECT_EQ(bracket(lx, lx).matrix.norm(), 0.0);
  const GroupSpec t3 = make_group(Family::Torus, 3);
  Rng rng(4);
  EXPECT_EQ(bracket(random_algebra(t3, rng), random_algebra(t3, rng)).matrix.norm(), 0.0);
  EXPECT_THROW(bracket(lx, make_algebra_element(make_group(Family::SU, 2), MatrixXcd::Zero(2, 2))), DimensionError);
}

TEST(Bracket, JacobiAntisymmetryBilinearity) {
  for (const auto& [f, p] : kFamilies) {
    const GroupSpec g = make_group(f, p);
    Rng rng(21);
    for (int t = 0; t < 100; ++t) {
      const AlgebraElement a = random_algebra(g, rng), b = random_algebra(g, rng), c = random_algebra(g, rng);
      const MatrixXcd jac = bracket(a, bracket(b, c)).matrix + bracket(b, bracket(c, a)).matrix +
                            bracket(c, bracket(a, b)).matrix;
      EXPECT_LT(jac.norm(), 1e-12);
      EXPECT_LT((bracket(a, b).matrix + bracket(b, a).matrix).norm(), 1e-12);
      AlgebraElement ab{g.id, 2.0 * a.matrix + b.matrix};
      EXPECT_LT((bracket(ab, c).matrix - 2.0 * bracket(a, c).matrix - bracket(b, c).matrix).norm(), 1e-12);
    }
  }
}

TEST(Subalgebra, Examples) {
  const GroupSpec su2 = make_group(Family::SU, 2);
  MatrixXcd sz = MatrixXcd::Zero(2, 2), sx = MatrixXcd::Zero(2, 2);
  sz(0, 0) = cplx(0, 0.5);
  sz(1, 1) = cplx(0, -0.5);
  sx(0, 1) = cplx(0, 0.5);
  sx(1, 0) = cplx(0, 0.5);
  const AlgebraElement a = make_algebra_element(su2, sz), b = make_algebra_element(su2, sx);
  EXPECT_EQ(generated_subalgebra_dim(a, b), 3);
  EXPECT_EQ(generated_subalgebra_dim(a, a), 1);
  EXPECT_EQ(is_dense_couple(su2, a, b), Density::Dense);

  const GroupSpec t3 = make_group(Family::Torus, 3);
  EXPECT_EQ(generated_subalgebra_dim(torus_element(t3, VectorXd::Unit(3, 0)), torus_element(t3, VectorXd::Unit(3, 1))), 2);
}

TEST(Subalgebra, MonotoneAndBasisInvariant) {
  for (const auto& [f, p] : kFamilies) {
    const GroupSpec g = make_group(f, p);
    Rng rng(8);
    for (int t = 0; t < 5; ++t) {
      const AlgebraElement a = random_algebra(g, rng), b = random_algebra(g, rng), c = random_algebra(g, rng);
      const int d2 = generated_subalgebra_dim(a, b);
      EXPECT_LE(d2, g.algebra_dim);
      EXPECT_LE(d2, generated_subalgebra_dim(std::vector<AlgebraElement>{a, b, c}));
      const AlgebraElement a2{g.id, a.matrix + 3.0 * b.matrix}, b2{g.id, a.matrix - b.matrix};
      EXPECT_EQ(d2, generated_subalgebra_dim(a2, b2));
    }
  }
}

TEST(DenseCouple, TorusVerdicts) {
  const GroupSpec t2 = make_group(Family::Torus, 2);
  VectorXd a(2), b(2);
  a << 1, 0;
  b << 2, 0;
  EXPECT_EQ(is_dense_couple(t2, torus_element(t2, a), torus_element(t2, b)), Density::NotDense);
  b << 0, std::sqrt(2.0);
  EXPECT_EQ(is_dense_couple(t2, torus_element(t2, a), torus_element(t2, b)), Density::Dense);
  // A single slope-sqrt(2) line in T^2 plus a multiple of it: no relation found.
  a << 1, std::sqrt(2.0);
  b = 2.0 * a;
  EXPECT_EQ(is_dense_couple(t2, torus_element(t2, a), torus_element(t2, b)), Density::ProbablyDense);
  a << 1, 1.5;
  b = -a;
  EXPECT_EQ(is_dense_couple(t2, torus_element(t2, a), torus_element(t2, b)), Density::NotDense);
}

TEST(DenseCouple, UnitaryPairIsNeverDense) {
  // Two elements of su(n) inside u(n) generate at most su(n): closed, not dense.
  const GroupSpec u2 = make_group(Family::U, 2);
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    AlgebraElement a = random_algebra(u2, rng), b = random_algebra(u2, rng);
    const cplx ta = a.matrix.trace() / 2.0, tb = b.matrix.trace() / 2.0;
    a.matrix -= ta * MatrixXcd::Identity(2, 2);
    b.matrix -= tb * MatrixXcd::Identity(2, 2);
    EXPECT_EQ(is_dense_couple(u2, a, b), Density::NotDense);
  }
  AlgebraElement a = random_algebra(u2, rng), b = random_algebra(u2, rng);
  EXPECT_EQ(is_dense_couple(u2, a, b), Density::Dense);
}

TEST(Relations, AgreesWithBruteForce) {
  const std::vector<std::vector<double>> cases{
      {1.0, std::sqrt(2.0)},     {1.0, 2.0},          {3.0, -7.0, 5.0},        {1.0, std::sqrt(2.0), std::sqrt(3.0)},
      {1.0, std::sqrt(2.0), 1.0 + std::sqrt(2.0)}, {0.5, 0.25},  {std::numbers::pi, 1.0}, {std::numbers::pi, 2 * std::numbers::pi}};
  for (const auto& c : cases) {
    const VectorXd v = Eigen::Map<const VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    const double tol = 1e-9 * v.cwiseAbs().maxCoeff();
    const bool oracle = brute_force_relation(v, 12, tol);
    const RelationSearch r = integer_relations(v);
    EXPECT_EQ(oracle, !r.relations.empty()) << v.transpose();
    for (const auto& m : r.relations) {
      double dot = 0;
      for (std::size_t i = 0; i < m.size(); ++i) dot += static_cast<double>(m[i]) * v(static_cast<Eigen::Index>(i));
      EXPECT_LT(std::abs(dot), 1e-8);
    }
  }
  VectorXd v(2);
  v << 1.0, std::sqrt(2.0);
  EXPECT_EQ(rational_rank(v), 2);
  v << 1.0, 2.0;
  EXPECT_EQ(rational_rank(v), 1);
}

TEST(Adjoint, Examples) {
  const GroupSpec so3 = make_group(Family::SO, 3);
  const AlgebraElement lx = make_algebra_element(so3, so3_generator(0));
  const AlgebraElement lz = make_algebra_element(so3, so3_generator(2));
  EXPECT_LT((adjoint(identity_element(so3), lx).matrix - lx.matrix).norm(), 1e-15);
  AlgebraElement quarter = lz;
  quarter.matrix *= std::numbers::pi / 2;
  const GroupElement rz = exp_matrix(so3, quarter);
  EXPECT_LT((adjoint(rz, lx).matrix - so3_generator(1)).norm(), 1e-14);
  const GroupSpec t2 = make_group(Family::Torus, 2);
  VectorXd f(2);
  f << 0.3, -1.1;
  const AlgebraElement ta = torus_element(t2, f);
  EXPECT_LT((adjoint(haar_sample(t2, 9), ta).matrix - ta.matrix).norm(), 1e-15);
}

TEST(Adjoint, PreservesAlgebra) {
  for (const auto& [fam, p] : kFamilies) {
    const GroupSpec g = make_group(fam, p);
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
      const AlgebraElement ad = adjoint(haar_sample(g, rng), random_algebra(g, rng));
      EXPECT_LT(algebra_residual(g, ad.matrix), 1e-10) << to_string(g.id);
    }
  }
}

TEST(Isotropy, Examples) {
  const GroupSpec so3 = make_group(Family::SO, 3);
  EXPECT_EQ(isotropy_algebra(so3, VectorXd(VectorXd::Zero(3))).size(), 3u);
  const auto iso = isotropy_algebra(so3, VectorXd(VectorXd::Unit(3, 0)));
  ASSERT_EQ(iso.size(), 1u);
  EXPECT_LT((iso[0].matrix * VectorXcd(VectorXcd::Unit(3, 0))).norm(), 1e-12);
  const GroupSpec u2 = make_group(Family::U, 2);
  VectorXcd z(2);
  z << 1.0, 0.0;
  EXPECT_EQ(isotropy_algebra(u2, z).size(), 1u);
}

TEST(Isotropy, EquivariantDimension) {
  for (const auto& [fam, p] : kFamilies) {
    const GroupSpec g = make_group(fam, p);
    Rng rng(17);
    std::normal_distribution<double> n;
    for (int t = 0; t < 100 / static_cast<int>(kFamilies.size()) + 1; ++t) {
      VectorXcd x(g.matrix_dim);
      for (auto& v : x) v = g.is_complex ? cplx(n(rng), n(rng)) : cplx(n(rng), 0.0);
      if (t % 3 == 0) x(0) = 0.0;
      const GroupElement h = haar_sample(g, rng);
      EXPECT_EQ(isotropy_algebra(g, x).size(), isotropy_algebra(g, VectorXcd(h.matrix * x)).size()) << to_string(g.id);
    }
  }
}

TEST(FreePoint, Examples) {
  const double r = 1.0 / std::sqrt(2.0);
  const FreePointResult a = is_free_point_E62({r * VectorXd::Unit(3, 0), r * VectorXd::Unit(3, 1)});
  EXPECT_TRUE(a.free);
  ASSERT_TRUE(a.image.has_value());
  EXPECT_NEAR((*a.image)[0], 0.5, 1e-15);
  EXPECT_NEAR((*a.image)[1], 0.0, 1e-15);
  EXPECT_TRUE(a.interior.value());
  EXPECT_FALSE(is_free_point_E62({VectorXd::Unit(3, 0), VectorXd::Unit(3, 0)}).free);
  const double s = 1.0 / std::sqrt(3.0);
  EXPECT_TRUE(is_free_point_E62({s * VectorXd::Unit(4, 0), s * VectorXd::Unit(4, 1), s * VectorXd::Unit(4, 2)}).free);
  EXPECT_THROW(is_free_point_E62({VectorXd::Unit(3, 0)}), DimensionError);
}
