#include "detvec/detvec.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace detvec;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// x' = A x with A = [[c, -1], [1, c]]: x(t) = e^{ct} R(t) x0.
VectorXd spiral_exact(double c, const VectorXd& x0, double t) {
  MatrixXd R(2, 2);
  R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return std::exp(c * t) * R * x0;
}

VFieldExpr spiral(double c) {
  MatrixXd A(2, 2);
  A << c, -1, 1, c;
  return linear_field(A, Chart::euclidean(2));
}

double angle_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2 * std::numbers::pi);
  return std::min(d, 2 * std::numbers::pi - d);
}

}  // namespace

TEST(Integrator, ClosedFormFlows) {
  EXPECT_NEAR(integrate_flow(radial(1), vec({1.0}), std::log(2.0))(0), 2.0, 1e-9);
  const VectorXd y = integrate_flow(complex_structure_field(1), vec({1.0, 0.0}), std::numbers::pi / 2);
  EXPECT_NEAR(y(0), 0.0, 1e-9);
  EXPECT_NEAR(y(1), 1.0, 1e-9);
  const VectorXd z = integrate_flow(product_field(1, 1, vec({1.0})), vec({1.0, 0.0}), 1.0);
  EXPECT_NEAR(z(0), std::numbers::e, 1e-9);
  EXPECT_NEAR(z(1), 1.0, 1e-9);
}

TEST(Integrator, AnglesAreReduced) {
  const VectorXd z = integrate_flow(product_field(1, 2, vec({1.0, -1.0})), vec({0.0, 0.0, 0.0}), 10.0);
  EXPECT_GE(z(1), 0.0);
  EXPECT_LT(z(1), 2 * std::numbers::pi);
  EXPECT_GE(z(2), 0.0);
  EXPECT_NEAR(angle_distance(z(1), 10.0), 0.0, 1e-8);
  EXPECT_NEAR(angle_distance(z(2), -10.0), 0.0, 1e-8);
}

TEST(Integrator, ErrorWithinTolerance) {
  const VectorXd x0 = vec({1.0, 0.5});
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    const double err = (integrate_flow(spiral(0.1), x0, 3.0, tol) - spiral_exact(0.1, x0, 3.0)).norm();
    EXPECT_LT(err, 10 * tol) << tol;
  }
}

TEST(Integrator, ErrorShrinksWithTolerance) {
  // The final error tracks tol roughly linearly under step control: quartering
  // tol must cut it at least fourfold and halving it must help measurably.
  const VectorXd x0 = vec({1.0, 0.5});
  auto err = [&](double tol) { return (integrate_flow(spiral(0.1), x0, 3.0, tol) - spiral_exact(0.1, x0, 3.0)).norm(); };
  for (double tol : {1e-5, 1e-6, 1e-7}) {
    EXPECT_GE(err(tol) / err(tol / 4), 4.0) << tol;
    EXPECT_GE(err(tol) / err(tol / 2), 1.5) << tol;
  }
}

TEST(Integrator, GroupProperty) {
  const VFieldExpr X1 = un_pair(2).X1;
  const VectorXd p = vec({0.7, -0.2, 1.1, 0.4});
  for (const auto& [t, s] : std::vector<std::pair<double, double>>{{0.3, 0.5}, {1.0, 0.25}, {0.8, -0.3}}) {
    const VectorXd a = integrate_flow(X1, p, t + s, 1e-12);
    const VectorXd b = integrate_flow(X1, integrate_flow(X1, p, s, 1e-12), t, 1e-12);
    EXPECT_LT((a - b).norm(), 1e-9);
  }
  // Backward flow inverts the forward flow.
  EXPECT_LT((integrate_flow(X1, integrate_flow(X1, p, 1.3, 1e-12), -1.3, 1e-12) - p).norm(), 1e-9);
}

TEST(Integrator, TrajectoryRecordAndCsv) {
  FlowOptions o;
  o.record = true;
  const Trajectory tr = integrate_trajectory(product_field(1, 1, vec({2.0})), vec({0.5, 0.0}), 1.0, o);
  ASSERT_GE(tr.points.size(), 2u);
  EXPECT_EQ(tr.times.front(), 0.0);
  EXPECT_NEAR(tr.times.back(), 1.0, 1e-15);
  for (std::size_t i = 1; i < tr.times.size(); ++i) EXPECT_GT(tr.times[i], tr.times[i - 1]);
  EXPECT_LE(tr.max_error_estimate, 1.0);
  EXPECT_EQ(static_cast<int>(tr.points.size()), tr.steps + 1);
  const std::string csv = trajectory_csv(tr, Chart::product(1, 1));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x1,th1");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2);
  }
  EXPECT_EQ(rows, static_cast<int>(tr.points.size()));
}

TEST(Integrator, RejectsBadInput) {
  EXPECT_THROW(integrate_flow(radial(2), vec({1.0}), 1.0), DimensionError);
  FlowOptions o;
  o.max_steps = 5;
  EXPECT_THROW(integrate_trajectory(spiral(0.0), vec({1.0, 0.0}), 100.0, o), NumericError);
  // Finite-time blowup of x' = x^2 overflows the field: a domain exit.
  const VFieldExpr blow(Chart::euclidean(1), {xvar(0) * xvar(0)});
  EXPECT_THROW(integrate_flow(blow, vec({1.0}), 2.0), DomainError);
}

TEST(Closure, Classes) {
  EXPECT_EQ(trajectory_closure_class(vec({1.0, std::sqrt(2.0)}), vec({0, 0, 0}), 1).dim, 2);
  EXPECT_EQ(trajectory_closure_class(vec({1.0, std::sqrt(2.0)}), vec({0, 0, 0}), 1).kind, ClosureClass::Kind::TorusClosure);
  EXPECT_EQ(trajectory_closure_class(vec({1.0, 2.0}), vec({0, 0, 0}), 1).dim, 1);
  EXPECT_EQ(trajectory_closure_class(vec({1.0, 2.0}), vec({0.1, 0, 0}), 1).kind, ClosureClass::Kind::Unbounded);
  EXPECT_EQ(trajectory_closure_class(vec({0.0, 0.0}), vec({0, 1, 2}), 1).kind, ClosureClass::Kind::FixedPoint);
  EXPECT_EQ(trajectory_closure_class(product_field(2, 2, vec({1.0, std::sqrt(3.0)})), vec({0, 0, 1, 1})).dim, 2);
  EXPECT_THROW(trajectory_closure_class(vertical_field(1, 1, vec({1.0})), vec({0, 0})), PreconditionError);
  EXPECT_THROW(trajectory_closure_class(vec({1.0}), vec({0, 0, 0}), 1), DimensionError);
}

TEST(Closure, AgreesWithIntegratedOrbit) {
  // Along x = 0 the orbit of th + t V with V = (1, 2) returns to its start at t = 2 pi.
  const VFieldExpr X = product_field(1, 2, vec({1.0, 2.0}));
  const VectorXd p = vec({0.0, 0.3, 0.4});
  const VectorXd q = integrate_flow(X, p, 2 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(q(0), 0.0, 1e-12);
  EXPECT_LT(angle_distance(q(1), p(1)) + angle_distance(q(2), p(2)), 1e-8);
}

namespace {

VFieldExpr vertical_drift(int k, int s, const std::vector<Expr>& w) {
  std::vector<Expr> comps(static_cast<std::size_t>(k), constant(0.0));
  for (const auto& e : w) comps.push_back(e);
  return VFieldExpr(Chart::product(k, s), comps);
}

}  // namespace

TEST(Straighten, ZeroDriftGivesIdentity) {
  const auto st = straighten_lemma37(vertical_drift(2, 1, {constant(0.0)}), 1.0, 2.0);
  const auto rep = check_straightening(st, 1, 100);
  EXPECT_EQ(rep.identity_defect, 0.0);
  EXPECT_LT(rep.residual, 1e-6);
  for (const auto& p : {vec({0.3, 0.1, 1.0}), vec({3.0, -1.0, 5.0})}) EXPECT_EQ(st.map(p), p);
}

TEST(Straighten, PlateauDrift) {
  const Chart c = Chart::product(2, 1);
  const Expr w = plateau(norm2(2), -2, -1, 4, 9);
  const auto st = straighten_lemma37(vertical_drift(2, 1, {w}), 1.0, 2.0);
  const auto rep = check_straightening(st, 2, 200);
  EXPECT_EQ(rep.identity_defect, 0.0);
  EXPECT_LT(rep.residual, 1e-6);
  EXPECT_LT(rep.tail, 1e-9);
  EXPECT_LT(rep.bundle_defect, 1e-12);
  (void)c;
}

TEST(Straighten, DocumentedDriftOnLine) {
  const Expr w = plateau(norm2(1), -2, -1, 4, 9);
  const auto st = straighten_lemma37(vertical_drift(1, 1, {w}), 1.0, 2.0);
  const auto rep = check_straightening(st, 7, 200);
  EXPECT_EQ(rep.identity_defect, 0.0);
  EXPECT_LT(rep.residual, 1e-6);
  EXPECT_LT(rep.tail, 1e-9);
}

TEST(Straighten, NonConstantDriftWithTwoAngles) {
  const Expr w1 = constant(0.5) + xvar(0) * xvar(1);
  const Expr w2 = cos(constant(1.0) * xvar(0));
  const auto st = straighten_lemma37(vertical_drift(2, 2, {w1, w2}), 0.5, 1.5);
  const auto rep = check_straightening(st, 3, 150);
  EXPECT_EQ(rep.identity_defect, 0.0);
  EXPECT_LT(rep.residual, 1e-6);
  EXPECT_LT(rep.tail, 1e-9);
  EXPECT_LT(rep.bundle_defect, 1e-12);
}

TEST(Straighten, DropCutoffStraightensCompletely) {
  // W vanishes on |x| <= b = 2: the whole field straightens to xi.
  const Expr w = constant(1.0) - plateau(norm2(2), -2, -1, 4.5, 9);
  const auto st = straighten_lemma37(vertical_drift(2, 1, {w}), 1.0, 2.0, true);
  EXPECT_TRUE(st.chi.is_zero());
  const auto rep = check_straightening(st, 4, 150, 5.0);
  EXPECT_EQ(rep.identity_defect, 0.0);
  EXPECT_LT(rep.residual, 1e-6);
  EXPECT_EQ(rep.tail, 0.0);
  // A drift that is nonzero near the origin is refused.
  EXPECT_THROW(straighten_lemma37(vertical_drift(2, 1, {constant(1.0)}), 1.0, 2.0, true), PreconditionError);
}

TEST(Straighten, Preconditions) {
  const VFieldExpr W = vertical_drift(1, 1, {constant(1.0)});
  EXPECT_THROW(straighten_lemma37(W, 2.0, 1.0), PreconditionError);
  EXPECT_THROW(straighten_lemma37(W, 1.0, 1.0), PreconditionError);
  EXPECT_THROW(straighten_lemma37(W, 0.0, 1.0), PreconditionError);
  EXPECT_THROW(straighten_lemma37(VFieldExpr(Chart::product(1, 1), {xvar(0), constant(1.0)}), 1.0, 2.0),
               PreconditionError);
  EXPECT_THROW(straighten_lemma37(VFieldExpr(Chart::product(1, 1), {constant(0.0), cos(thvar(0, 1))}), 1.0, 2.0),
               PreconditionError);
  EXPECT_THROW(straighten_lemma37(radial(2), 1.0, 2.0), DimensionError);
}

TEST(Straighten, CommutesWithAngleShifts) {
  const auto st = straighten_lemma37(vertical_drift(2, 1, {constant(2.0) * xvar(0)}), 1.0, 3.0);
  Rng rng(5);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int t = 0; t < 50; ++t) {
    const VectorXd p = vec({u(rng), u(rng), u(rng)});
    const VectorXd d = vec({0, 0, u(rng)});
    EXPECT_LT((st.map(p + d) - st.map(p) - d).norm(), 1e-12);
    EXPECT_EQ(st.map(p).head(2), p.head(2));
  }
}

TEST(TruncatedCommutant, CommutantDimension) {
  const auto r1 = lemma31_nullspace(1, 1, vec({std::sqrt(2.0)}), vec({1.0}), jet5(1), 4, 3);
  EXPECT_EQ(r1.expected, 2);
  EXPECT_EQ(r1.dimension, 2);
  const auto r2 = lemma31_nullspace(2, 1, vec({std::sqrt(2.0)}), vec({1.0}), jet5(2), 3, 2);
  EXPECT_EQ(r2.expected, 5);
  EXPECT_EQ(r2.dimension, 5);
  EXPECT_EQ(static_cast<int>(r2.basis.size()), r2.dimension);
}

TEST(TruncatedCommutant, StableUnderTruncationBump) {
  const auto a = lemma31_nullspace(1, 1, vec({std::sqrt(2.0)}), vec({1.0}), jet5(1), 4, 3);
  const auto b = lemma31_nullspace(1, 1, vec({std::sqrt(2.0)}), vec({1.0}), jet5(1), 5, 4);
  EXPECT_EQ(a.dimension, b.dimension);
  const auto c = lemma31_nullspace(2, 1, vec({std::sqrt(2.0)}), vec({1.0}), jet5(2), 4, 3);
  EXPECT_EQ(c.dimension, 5);
}

TEST(TruncatedCommutant, BasisCommutesWithX) {
  const int k = 2, s = 1;
  const VFieldExpr X = product_field(k, s, vec({std::sqrt(2.0)}));
  const auto r = lemma31_nullspace(k, s, vec({std::sqrt(2.0)}), vec({1.0}), jet5(k), 3, 2);
  Rng rng(8);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& Y : r.basis) {
    const VFieldExpr br = lie_bracket_fields(X, Y);
    for (int t = 0; t < 20; ++t) {
      const VectorXd p = vec({u(rng), u(rng), u(rng)});
      EXPECT_LT(evaluate(br, p).norm(), 1e-9 * (1 + evaluate(Y, p).norm()));
    }
  }
}

TEST(TruncatedCommutant, Guards) {
  EXPECT_THROW(lemma31_nullspace(0, 1, vec({1.0}), vec({1.0}), constant(0.0), 2, 1), PreconditionError);
  EXPECT_THROW(lemma31_nullspace(1, 1, vec({1.0, 2.0}), vec({1.0}), constant(0.0), 2, 1), DimensionError);
  EXPECT_THROW(lemma31_nullspace(4, 3, vec({1, 2, 3}), vec({1, 1, 1}), constant(0.0), 7, 6), PreconditionError);
  // h with a nonzero fourth jet is rejected.
  EXPECT_THROW(lemma31_nullspace(1, 1, vec({1.0}), vec({1.0}), pow(xvar(0), 4), 2, 1), PreconditionError);
}

TEST(FifthJet, ScalingRigidity) {
  for (int k : {1, 2, 3}) {
    EXPECT_EQ(scaling_defect(jet5(k), k, 1.0), 0.0);
    for (double a : {0.5, 0.9, 1.1, 2.0}) EXPECT_GE(scaling_defect(jet5(k), k, a), 9e-4) << k << " " << a;
  }
  EXPECT_NEAR(fifth_derivative_at_origin(jet5(2), vec({1.0, 0.0})), 120.0, 1e-9);
  EXPECT_NEAR(fifth_derivative_at_origin(jet5(2), vec({0.0, 1.0})), 0.0, 1e-12);
  EXPECT_NEAR(fifth_derivative_at_origin(jet5(1), vec({0.5})), 120.0 / 32.0, 1e-9);
}
