#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "riccisol/expr.hpp"
#include "support/generators.hpp"

using namespace riccisol;

namespace {

Expr var(int i) { return Expr::variable(i); }

double eval_at(const Expr& e, std::initializer_list<double> p) {
  return evaluate(e, std::span<const double>(p.begin(), p.size()));
}

}  // namespace

TEST_CASE("parse: grammar reading") {
  // x1^2 + x2^2
  const Expr e = parse_expr("x1^2 + x2^2", 2);
  const Expr expect = Expr::binary(BinaryOp::Add,
                                   Expr::binary(BinaryOp::Pow, var(0), Expr::constant(2)),
                                   Expr::binary(BinaryOp::Pow, var(1), Expr::constant(2)));
  CHECK(structurally_equal(e, expect));

  const Expr g = parse_expr("exp(2*x1)", 1);
  const Expr gexpect =
      Expr::unary(UnaryOp::Exp, Expr::binary(BinaryOp::Mul, Expr::constant(2), var(0)));
  CHECK(structurally_equal(g, gexpect));
}

TEST_CASE("parse: positional aliases and named coordinates") {
  CHECK(structurally_equal(parse_expr("x + y", 2),
                           Expr::binary(BinaryOp::Add, var(0), var(1))));
  CHECK(structurally_equal(parse_expr("t", 4), var(3)));
  const std::array<std::string, 3> names{"u1", "u2", "t"};
  CHECK(structurally_equal(parse_expr("t*u2", names), Expr::binary(BinaryOp::Mul, var(2), var(1))));
}

TEST_CASE("parse: precedence and associativity") {
  // ^ binds tighter than unary minus, which binds tighter than '*'
  CHECK(eval_at(parse_expr("-x1^2", 1), {3.0}) == -9.0);
  CHECK(eval_at(parse_expr("-2*x1", 1), {5.0}) == -10.0);
  CHECK(eval_at(parse_expr("2-3-4", 1), {0.0}) == -5.0);   // left-assoc
  CHECK(eval_at(parse_expr("24/4/2", 1), {0.0}) == 3.0);   // left-assoc
  CHECK(eval_at(parse_expr("2^2^3", 1), {0.0}) == 64.0);   // (2^2)^3
  CHECK(eval_at(parse_expr("x1^-2", 1), {2.0}) == 0.25);
  CHECK(eval_at(parse_expr("(1+2)*3", 1), {0.0}) == 9.0);
}

TEST_CASE("parse: errors carry spans") {
  CHECK_THROWS_AS(parse_expr("x3", 2), ParseError);
  try {
    parse_expr("x1 + x3", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span().begin == 5);
    CHECK(e.span().end == 7);
    CHECK(std::string(e.what()).find("out of range") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_expr("foo(x1)", 1), ParseError);     // unknown function
  CHECK_THROWS_AS(parse_expr("x1 + bar", 1), ParseError);    // unknown identifier
  CHECK_THROWS_AS(parse_expr("x1^x1", 1), ParseError);       // non-constant exponent
  CHECK_THROWS_AS(parse_expr("(x1", 1), ParseError);         // unbalanced paren
  CHECK_THROWS_AS(parse_expr("x1 + * 2", 1), ParseError);    // unexpected token
  CHECK_THROWS_AS(parse_expr("", 1), ParseError);

  // Multi-line spans resolve to line/column.
  try {
    parse_expr("1 +\n  qq", 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("2:3") != std::string::npos);
  }
}

TEST_CASE("parse: constant-folded exponents") {
  CHECK(eval_at(parse_expr("x1^(1+1)", 1), {3.0}) == 9.0);
  CHECK(eval_at(parse_expr("x1^-(2)", 1), {2.0}) == 0.25);
}

TEST_CASE("differentiate: polynomial, chain, independence") {
  const Expr e = parse_expr("x1^2 + x2^2", 2);
  CHECK(structurally_equal(normalize(differentiate(e, 0)),
                           Expr::binary(BinaryOp::Mul, Expr::constant(2), var(0))));

  const Expr g = parse_expr("exp(2*x1)", 1);
  const Expr dg = differentiate(g, 0);
  CHECK(structurally_equal(
      normalize(dg), Expr::binary(BinaryOp::Mul, Expr::constant(2),
                                  Expr::unary(UnaryOp::Exp, Expr::binary(BinaryOp::Mul,
                                                                         Expr::constant(2),
                                                                         var(0))))));

  CHECK(structurally_equal(differentiate(parse_expr("x1^2", 2), 1), Expr::constant(0)));
  CHECK(structurally_equal(differentiate(Expr::constant(7.5), 0), Expr::constant(0)));
}

TEST_CASE("differentiate: every unary rule against small closed forms") {
  const Expr x = var(0);
  const double p = 0.7;
  auto d1 = [&](const Expr& e) { return eval_at(differentiate(e, 0), {p}); };
  CHECK(d1(sin(x)) == doctest::Approx(std::cos(p)).epsilon(1e-14));
  CHECK(d1(cos(x)) == doctest::Approx(-std::sin(p)).epsilon(1e-14));
  CHECK(d1(tan(x)) == doctest::Approx(1.0 / (std::cos(p) * std::cos(p))).epsilon(1e-14));
  CHECK(d1(sinh(x)) == doctest::Approx(std::cosh(p)).epsilon(1e-14));
  CHECK(d1(cosh(x)) == doctest::Approx(std::sinh(p)).epsilon(1e-14));
  CHECK(d1(tanh(x)) == doctest::Approx(1.0 / (std::cosh(p) * std::cosh(p))).epsilon(1e-14));
  CHECK(d1(ln(x)) == doctest::Approx(1.0 / p).epsilon(1e-14));
  CHECK(d1(sqrt(x)) == doctest::Approx(0.5 / std::sqrt(p)).epsilon(1e-14));
  CHECK(d1(Expr(x) / (1.0 + x * x)) ==
        doctest::Approx((1.0 - p * p) / ((1.0 + p * p) * (1.0 + p * p))).epsilon(1e-13));
}

TEST_CASE("evaluate: values and domain errors") {
  CHECK(eval_at(parse_expr("x1^2 + x2^2", 2), {3.0, 4.0}) == 25.0);
  CHECK(eval_at(parse_expr("exp(2*x1)", 1), {0.0}) == 1.0);

  CHECK_THROWS_AS(eval_at(parse_expr("sqrt(x1)", 1), {-1.0}), EvalDomainError);
  CHECK_THROWS_AS(eval_at(parse_expr("ln(x1)", 1), {0.0}), EvalDomainError);
  CHECK_THROWS_AS(eval_at(parse_expr("1/x1", 1), {0.0}), EvalDomainError);
  CHECK_THROWS_AS(eval_at(parse_expr("x1^-1", 1), {0.0}), EvalDomainError);
  CHECK_THROWS_AS(eval_at(parse_expr("x1^0.5", 1), {-2.0}), EvalDomainError);

  try {
    eval_at(parse_expr("1 + sqrt(x1)", 1), {-4.0});
    FAIL("expected a domain error");
  } catch (const EvalDomainError& e) {
    CHECK(e.subexpression() == "sqrt(x1)");
    REQUIRE(e.point().size() == 1);
    CHECK(e.point()[0] == -4.0);
  }

  // Too few coordinates is a precondition violation, not a domain error.
  CHECK_THROWS_AS(eval_at(parse_expr("x2", 2), {1.0}), std::invalid_argument);
}

TEST_CASE("derivative_table: examples") {
  {
    DerivativeTable t(parse_expr("x1*x2", 2), 2, 2);
    CHECK(structurally_equal(t.partial({0, 1}), Expr::constant(1)));
    CHECK(structurally_equal(t.partial({1, 0}), t.partial({0, 1})));
  }
  {
    DerivativeTable t(Expr::constant(5), 2, 4);
    CHECK(structurally_equal(t.root(), Expr::constant(5)));
    CHECK(structurally_equal(t.partial({0}), Expr::constant(0)));
    CHECK(structurally_equal(t.partial({0, 1, 0, 1}), Expr::constant(0)));
  }
  {
    const Expr e = parse_expr("exp(x1)", 1);
    DerivativeTable t(e, 1, 4);
    CHECK(structurally_equal(normalize(t.partial({0})), normalize(e)));
    CHECK(structurally_equal(normalize(t.partial({0, 0, 0, 0})), normalize(e)));
  }
  CHECK_THROWS_AS(DerivativeTable(var(0), 1, 5), std::invalid_argument);
  DerivativeTable t(var(0), 1, 1);
  CHECK_THROWS_AS(t.partial({0, 0}), std::out_of_range);
}

TEST_CASE("property: print/parse round-trip after normalization") {
  for (int dim = 1; dim <= 4; ++dim) {
    gen::ExprGen g(1234 + static_cast<std::uint64_t>(dim), dim);
    for (int iter = 0; iter < 300; ++iter) {
      const Expr e = g.any(8);
      const std::string text = to_string(e);
      Expr back = parse_expr(text, dim);
      CAPTURE(text);
      CHECK(structurally_equal(normalize(back), normalize(e)));
    }
  }
}

TEST_CASE("property: mixed partials commute (Clairaut)") {
  for (int dim = 2; dim <= 3; ++dim) {
    gen::ExprGen g(555 + static_cast<std::uint64_t>(dim), dim);
    for (int iter = 0; iter < 60; ++iter) {
      const Expr e = g.smooth(5);
      const Vector p = g.point(-1.0, 1.0);
      const std::span<const double> sp(p.data(), static_cast<std::size_t>(p.size()));
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
          const double dij = evaluate(differentiate(differentiate(e, i), j), sp);
          const double dji = evaluate(differentiate(differentiate(e, j), i), sp);
          CAPTURE(to_string(e));
          CHECK(std::abs(dij - dji) <= 1e-12 * (1.0 + std::abs(dij)));
        }
    }
  }
}

TEST_CASE("property: symbolic derivative matches central differences") {
  const double h = 1e-5;
  for (int dim = 1; dim <= 3; ++dim) {
    gen::ExprGen g(99 + static_cast<std::uint64_t>(dim), dim);
    for (int iter = 0; iter < 80; ++iter) {
      const Expr e = g.smooth(4);
      Vector p = g.point(-0.9, 0.9);
      for (int i = 0; i < dim; ++i) {
        const std::span<const double> sp(p.data(), static_cast<std::size_t>(p.size()));
        const double sym = evaluate(differentiate(e, i), sp);
        const double x = p[i];
        p[i] = x + h;
        const double fp = evaluate(e, sp);
        p[i] = x - h;
        const double fm = evaluate(e, sp);
        p[i] = x;
        const double fd = (fp - fm) / (2.0 * h);
        CAPTURE(to_string(e));
        CHECK(std::abs(sym - fd) <= 1e-6 * (1.0 + std::abs(sym)));
      }
    }
  }
}

TEST_CASE("normalize folds constants and identities") {
  const Expr x = var(0);
  CHECK(structurally_equal(normalize(Expr::binary(BinaryOp::Add, x, Expr::constant(0))), x));
  CHECK(structurally_equal(normalize(Expr::binary(BinaryOp::Mul, Expr::constant(1), x)), x));
  CHECK(structurally_equal(normalize(Expr::binary(BinaryOp::Mul, Expr::constant(0), x)),
                           Expr::constant(0)));
  CHECK(structurally_equal(
      normalize(Expr::binary(BinaryOp::Pow, x, Expr::constant(1))), x));
  CHECK(structurally_equal(normalize(Expr::unary(UnaryOp::Neg, Expr::unary(UnaryOp::Neg, x))), x));
  CHECK(structurally_equal(normalize(parse_expr("2*3 + x1*1", 1)),
                           Expr::binary(BinaryOp::Add, Expr::constant(6), x)));
}
