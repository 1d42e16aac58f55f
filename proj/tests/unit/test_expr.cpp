#include "detvec/constructions.hpp"
#include "detvec/fields.hpp"
#include "detvec/lie.hpp"
#include "detvec/parser.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace detvec;

namespace {

VectorXd gaussian_point(int n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  VectorXd p(n);
  for (auto& v : p) v = scale * g(rng);
  return p;
}

// Oracle: central finite difference of a scalar expression.
double central_difference(const Expr& e, VectorXd p, int i, double h = 1e-5) {
  VectorXd q = p;
  p(i) += h;
  q(i) -= h;
  return (evaluate(e, detail::as_span(p)) - evaluate(e, detail::as_span(q))) / (2 * h);
}

const std::vector<std::string> kCorpus{
    "x1",
    "x1 + x2",
    "x1 - x2 - x3",
    "x1 - (x2 - x3)",
    "x1*x2*x3",
    "x1*(x2*x3)",
    "x1/x2/x3",
    "x1/(x2/x3)",
    "-x1",
    "--x1",
    "-x1^2",
    "(-x1)^2",
    "x1^-2",
    "(x1 + x2)^3",
    "(x1^2)^3",
    "-2",
    "-2*x1",
    "x1*-2",
    "x1 + (-2)",
    "x1 - (-2.5)",
    "(-2)^3",
    "3/4",
    "0.1 + 1e-7*x1",
    "1.5e+20*x2",
    "pi*x1",
    "sin(x1)",
    "cos(x1*x2) + sin(x3)^2",
    "sin(th1)",
    "cos(2*th1 - th2)*x1",
    "norm2(x)",
    "norm2(x) - 1",
    "(norm2(x) - 1)*x2",
    "jet5(x)",
    "jet5(x)*x3 + x1",
    "plateau(norm2(x); -2, -1, 0.25, 1)",
    "plateau(x1, 0, 1, 2, 3)",
    "plateau(x1 + x2; 1/3, 0.5, 2, 4)",
    "3*plateau(norm2(x); 4, 5, 6, 7)^2",
    "glue(x1; 0)",
    "glue(1 - x1; 3) - 2*glue(x1; 1)",
    "x1 - -x2",
    "-(x1 + x2)",
    "-(x1*x2)",
    "-x1*x2",
    "x1*(-x2)",
    "(x1 + x2)*(x1 - x2)",
    "x1/(x2 + 1)^2",
    "sin(cos(sin(x1)))",
    "x1^2 + 2*x1*x2 + x2^2",
    "1/(1 + norm2(x))",
};

}  // namespace

TEST(Parser, RoundTripCorpus) {
  const Chart c = Chart::product(3, 2);
  ASSERT_EQ(kCorpus.size(), 50u);
  for (const auto& text : kCorpus) {
    const Expr e = parse_scalar(text, c);
    const std::string printed = to_string(e);
    const Expr again = parse_scalar(printed, c);
    EXPECT_TRUE(equal(e, again)) << text << " -> " << printed;
    EXPECT_EQ(printed, to_string(again)) << text;
  }
}

TEST(Parser, RoundTripOfDerivatives) {
  const Chart c = Chart::euclidean(3);
  for (const auto& text : {"plateau(norm2(x); -2, -1, 0.25, 1)", "jet5(x)", "x1/(x2 + 1)^2", "-x1*sin(x2)"}) {
    const Expr d = differentiate(parse_scalar(text, c), 0);
    EXPECT_TRUE(equal(d, parse_scalar(to_string(d), c))) << text;
  }
}

TEST(Parser, NamedConstructors) {
  const VFieldExpr xi = parse_field("radial()", Chart::euclidean(3));
  VectorXd p(3);
  p << 1, 2, 3;
  EXPECT_EQ(evaluate(xi, p), p);

  const VFieldExpr x1 = parse_field("(norm2(x) - 1) * Jfield()", Chart::euclidean(4));
  const FieldPair un = un_pair(2);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const VectorXd q = gaussian_point(4, rng);
    EXPECT_LT((evaluate(x1, q) - evaluate(un.X1, q)).norm(), 1e-14);
  }
  const VFieldExpr k = parse_field("Kfield() + 2*Lfield()", Chart::euclidean(4));
  const auto yzu = quaternionic_fields(1);
  const VectorXd q = gaussian_point(4, rng);
  EXPECT_LT((evaluate(k, q) - evaluate(yzu[1], q) - 2 * evaluate(yzu[2], q)).norm(), 1e-14);
}

TEST(Parser, VectorLiteralAndPrinting) {
  const Chart c = Chart::product(1, 1);
  const VFieldExpr f = parse_field("[x1, 1.5]", c);
  EXPECT_EQ(to_string(f), "[x1, 1.5]");
  const VFieldExpr g = parse_field(to_string(parse_field("x1*[x1, -sin(th1)] - radial()", c)), c);
  EXPECT_EQ(to_string(g), "[x1*x1 - x1, x1*(-sin(th1)) - 0]");
}

TEST(Parser, Errors) {
  const Chart c = Chart::euclidean(3);
  auto kind_of = [&](const std::string& text, const Chart& ch) {
    try {
      parse_field(text, ch);
    } catch (const ParseError& e) {
      return std::make_pair(e.kind(), e.offset());
    }
    ADD_FAILURE() << "no error for " << text;
    return std::make_pair(ParseErrorKind::Syntax, std::size_t{0});
  };
  const auto [k1, o1] = kind_of("(x1 +", c);
  EXPECT_EQ(k1, ParseErrorKind::Syntax);
  EXPECT_EQ(o1, 5u);
  EXPECT_EQ(kind_of("foo(x1)", c).first, ParseErrorKind::UnknownIdentifier);
  EXPECT_EQ(kind_of("sin(x1, x2)", c).first, ParseErrorKind::Arity);
  EXPECT_EQ(kind_of("radial(1)", c).first, ParseErrorKind::Arity);
  EXPECT_EQ(kind_of("plateau(x1; 1, 2, 3)", c).first, ParseErrorKind::Arity);
  EXPECT_EQ(kind_of("[x1, x2]", c).first, ParseErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of("Jfield()", c).first, ParseErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of("x4*radial()", c).first, ParseErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of("x1", c).first, ParseErrorKind::Type);
  EXPECT_EQ(kind_of("radial()*radial()", c).first, ParseErrorKind::Type);
  EXPECT_EQ(kind_of("radial() + 1", c).first, ParseErrorKind::Type);
  EXPECT_EQ(kind_of("[th1, x1]", Chart::product(1, 1)).first, ParseErrorKind::Type);
  EXPECT_EQ(kind_of("x1 $ x2", c).first, ParseErrorKind::Syntax);
  EXPECT_EQ(kind_of("plateau(x1; 2, 1, 3, 4)*radial()", c).first, ParseErrorKind::Type);
}

TEST(Differentiate, Examples) {
  const Chart c = Chart::euclidean(3);
  EXPECT_EQ(to_string(differentiate(parse_scalar("x1^2", c), 0)), "2*x1");
  for (int j = 0; j < 3; ++j)
    EXPECT_TRUE(equal(differentiate(norm2(3), j), constant(2.0) * xvar(j)));
  EXPECT_TRUE(differentiate(parse_scalar("x2^3", c), 0).is_zero());
}

TEST(Differentiate, PlateauMatchesFiniteDifferences) {
  const Chart c = Chart::euclidean(3);
  const Expr e = parse_scalar("plateau(norm2(x); 0.5, 1, 2, 3)", c);
  const Expr d = differentiate(e, 0);
  Rng rng(5);
  int checked = 0;
  while (checked < 20) {
    const VectorXd p = gaussian_point(3, rng);
    const double fd = central_difference(e, p, 0);
    const double ex = evaluate(d, detail::as_span(p));
    EXPECT_NEAR(ex, fd, 1e-6 * std::max(1.0, std::abs(fd))) << p.transpose();
    ++checked;
  }
}

TEST(Differentiate, PrimitivesMatchFiniteDifferences) {
  const Chart c = Chart::euclidean(3);
  Rng rng(6);
  for (const auto& text : {"jet5(x)", "glue(x1 + 1; 2)", "sin(x1*x2)/(1 + x3^2)", "x1^-3 + cos(x2)", "plateau(x1; -1, 0, 0, 1)"}) {
    const Expr e = parse_scalar(text, c);
    for (int i = 0; i < 3; ++i) {
      const Expr d = differentiate(e, i);
      for (int t = 0; t < 10; ++t) {
        VectorXd p = gaussian_point(3, rng, 0.6);
        p(0) += 1.5;
        const double fd = central_difference(e, p, i);
        EXPECT_NEAR(evaluate(d, detail::as_span(p)), fd, 1e-6 * std::max(1.0, std::abs(fd))) << text;
      }
    }
  }
}

TEST(Differentiate, MixedPartialsCommute) {
  const Chart c = Chart::euclidean(3);
  Rng rng(7);
  for (const auto& text : {"plateau(norm2(x); -2, -1, 0.25, 1)", "jet5(x)", "x1*x2^3/(1 + norm2(x))", "sin(x1)*cos(x2*x3)"}) {
    const Expr e = parse_scalar(text, c);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const Expr a = differentiate(differentiate(e, i), j);
        const Expr b = differentiate(differentiate(e, j), i);
        for (int t = 0; t < 10; ++t) {
          const VectorXd p = gaussian_point(3, rng, 0.5);
          EXPECT_NEAR(evaluate(a, detail::as_span(p)), evaluate(b, detail::as_span(p)), 1e-8) << text;
        }
      }
  }
}

TEST(Primitives, PlateauAndJetProperties) {
  const std::array<double, 4> w{0.0, 1.0, 2.0, 3.0};
  EXPECT_EQ(plateau_value(-0.5, w), 0.0);
  EXPECT_EQ(plateau_value(0.0, w), 0.0);
  EXPECT_EQ(plateau_value(1.5, w), 1.0);
  EXPECT_EQ(plateau_value(3.0, w), 0.0);
  EXPECT_GT(plateau_value(0.5, w), 0.0);
  // jet5: fifth derivative in x1 at 0 is 5! = 120, lower ones vanish.
  const Chart c = Chart::euclidean(2);
  Expr d = jet5(2);
  const double origin[2] = {0.0, 0.0};
  for (int k = 1; k <= 5; ++k) {
    d = differentiate(d, 0);
    if (k < 5) EXPECT_EQ(evaluate(d, origin), 0.0) << k;
  }
  EXPECT_NEAR(evaluate(d, origin), 120.0, 1e-12);
  (void)c;
}

TEST(Evaluate, DomainErrors) {
  const Chart punctured = Chart::euclidean(2, true);
  const VFieldExpr f = parse_field("radial()/norm2(x)", punctured);
  EXPECT_THROW(evaluate(f, VectorXd(VectorXd::Zero(2))), DomainError);
  VectorXd p(2);
  p << 1, 0;
  EXPECT_NO_THROW(evaluate(f, p));
  const VFieldExpr g = parse_field("radial()/x1", Chart::euclidean(2));
  p << 0, 1;
  EXPECT_THROW(evaluate(g, p), DomainError);
  EXPECT_THROW(evaluate(g, VectorXd(VectorXd::Zero(3))), DimensionError);
}

TEST(Pushforward, IdentityAndUnitary) {
  const FieldPair un = un_pair(2);
  Rng rng(8);
  const MapExpr id = MapExpr::identity(un.chart);
  for (int t = 0; t < 10; ++t) EXPECT_EQ(pushforward_residual(id, un.X1, gaussian_point(4, rng)).norm(), 0.0);
  const GroupSpec u2 = make_group(Family::U, 2);
  const MapExpr g = MapExpr::make_linear(real_rep(u2, haar_sample(u2, 4).matrix), un.chart);
  EXPECT_LT(linear_tag_residual(g, 1), 1e-10);
  for (int t = 0; t < 100; ++t) EXPECT_LT(pushforward_residual(g, un.X1, gaussian_point(4, rng)).norm(), 1e-10);
}

TEST(Pushforward, StretchViolatesOnSphere) {
  const FieldPair un = un_pair(2);
  MatrixXd a = MatrixXd::Identity(4, 4);
  a(0, 0) = 2.0;
  const MapExpr f = MapExpr::make_linear(a, un.chart);
  Rng rng(9);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) worst = std::max(worst, pushforward_residual(f, un.X1, gaussian_point(4, rng).normalized()).norm());
  EXPECT_GT(worst, 0.1);
}

TEST(Pushforward, CompositionOfPreservers) {
  const FieldPair un = un_pair(2);
  const GroupSpec u2 = make_group(Family::U, 2);
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const MapExpr a = MapExpr::make_linear(real_rep(u2, haar_sample(u2, rng).matrix), un.chart);
    const MapExpr b = MapExpr::make_linear(real_rep(u2, haar_sample(u2, rng).matrix), un.chart);
    MapExpr ab = compose(a, b);
    ab.linear.reset();
    ab.jac = jacobian(ab.components, 4);
    for (int s = 0; s < 10; ++s) EXPECT_LT(pushforward_residual(ab, un.X1, gaussian_point(4, rng)).norm(), 1e-10);
  }
}

TEST(Pushforward, LinearMapsPreserveRadialExactly) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    MatrixXd a(3, 3);
    for (auto& v : a.reshaped()) v = std::normal_distribution<double>()(rng);
    const MapExpr f = MapExpr::make_linear(a, Chart::euclidean(3));
    EXPECT_EQ(pushforward_residual(f, radial(3), gaussian_point(3, rng)).norm(), 0.0);
  }
}

TEST(Bracket, Examples) {
  const Chart c = Chart::euclidean(2);
  const VFieldExpr xi = radial(c);
  const VFieldExpr d1 = parse_field("[1, 0]", c);
  const VFieldExpr b = lie_bracket_fields(xi, d1);
  EXPECT_TRUE(equal(b.components[0], constant(-1.0)));
  EXPECT_TRUE(b.components[1].is_zero());
  for (const auto& comp : lie_bracket_fields(xi, xi).components) EXPECT_TRUE(comp.is_zero());
  const VFieldExpr u = parse_field("[0, x1]", c), v = parse_field("[x2, 0]", c);
  const VFieldExpr uv = lie_bracket_fields(u, v);
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const VectorXd p = gaussian_point(2, rng);
    VectorXd expected(2);
    expected << p(0), -p(1);
    EXPECT_LT((evaluate(uv, p) - expected).norm(), 1e-14);
  }
}

TEST(Bracket, AntisymmetryAndJacobi) {
  const Chart c = Chart::euclidean(3);
  const VFieldExpr a = parse_field("[x2*x3, sin(x1), norm2(x)]", c);
  const VFieldExpr b = parse_field("plateau(norm2(x); -2, -1, 0.25, 1)*radial() + [1, 0, x1^2]", c);
  const VFieldExpr d = parse_field("[x3, -x2, x1*x2]", c);
  const VFieldExpr ab = lie_bracket_fields(a, b), ba = lie_bracket_fields(b, a);
  const VFieldExpr jac = lie_bracket_fields(a, lie_bracket_fields(b, d)) + lie_bracket_fields(b, lie_bracket_fields(d, a)) +
                         lie_bracket_fields(d, lie_bracket_fields(a, b));
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const VectorXd p = gaussian_point(3, rng, 0.7);
    EXPECT_LT((evaluate(ab, p) + evaluate(ba, p)).norm(), 1e-12);
    EXPECT_LT(evaluate(jac, p).norm(), 1e-10);
  }
  EXPECT_THROW(lie_bracket_fields(a, radial(2)), DimensionError);
}

TEST(Fields, TorusPeriodicity) {
  const VFieldExpr f = parse_field("[x1*cos(th1), sin(th1 - 2*th2), 1]", Chart::product(1, 2));
  EXPECT_LT(periodicity_residual(f, 3), 1e-10);
}
