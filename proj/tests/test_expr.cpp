#include <doctest.h>

#include <cmath>

#include "pseudospec/errors.hpp"
#include "pseudospec/expr.hpp"
#include "support.hpp"

using namespace pseudospec;
using testing_support::Rng;

namespace {

// Value at x, or NaN where the expression is undefined.
double try_eval(const Expr& e, double x) {
  try {
    return evaluate(e, x);
  } catch (const ConstructionError&) {
    return NAN;
  }
}

double central_difference(const Expr& e, double x, double h) {
  return (try_eval(e, x + h) - try_eval(e, x - h)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("parse builds the expected trees") {
    const Expr t = parse("tanh(x)");
    CHECK(t.op() == Op::Tanh);
    REQUIRE(t.children().size() == 1);
    CHECK(t.children()[0].op() == Op::Variable);

    const Expr g = parse("exp(-x^2)");
    REQUIRE(g.op() == Op::Exp);
    const Expr neg = g.children()[0];
    REQUIRE(neg.op() == Op::Neg);
    const Expr p = neg.children()[0];
    REQUIRE(p.op() == Op::Pow);
    CHECK(p.value() == 2.0);
    CHECK(p.children()[0].op() == Op::Variable);
  }

  TEST_CASE("unbalanced parenthesis reports offset 7 and a closing paren") {
    try {
      parse("sinh(x");
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.position() == 7);
      CHECK(e.expected() == "\")\"");
      CHECK(std::string(e.what()).find("expected \")\"") != std::string::npos);
    }
  }

  TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse("foo(x)"), UnknownFunction);
    CHECK_THROWS_AS(parse("y + 1"), UnknownFunction);
    CHECK_THROWS_AS(parse("x^x"), SyntaxError);
    CHECK_THROWS_AS(parse(""), SyntaxError);
    CHECK_THROWS_AS(parse("x +"), SyntaxError);
    CHECK_THROWS_AS(parse("(x))"), SyntaxError);
    CHECK_THROWS_AS(parse("2..5"), SyntaxError);
    try {
      parse("1 + bogus(x)");
    } catch (const UnknownFunction& e) {
      CHECK(e.name() == "bogus");
    }
  }

  TEST_CASE("precedence and associativity") {
    CHECK(evaluate(parse("-x^2"), 3.0) == doctest::Approx(-9.0));
    CHECK(evaluate(parse("2^3^2"), 0.0) == doctest::Approx(512.0));
    CHECK(evaluate(parse("2*3+4"), 0.0) == doctest::Approx(10.0));
    CHECK(evaluate(parse("2+3*4"), 0.0) == doctest::Approx(14.0));
    CHECK(evaluate(parse("8/4/2"), 0.0) == doctest::Approx(1.0));
    CHECK(evaluate(parse("5-3-1"), 0.0) == doctest::Approx(1.0));
    CHECK(evaluate(parse("x^-1"), 4.0) == doctest::Approx(0.25));
    CHECK(evaluate(parse("x^(1/2)"), 9.0) == doctest::Approx(3.0));
    CHECK(evaluate(parse("  sin ( x ) * cos(x)\t"), 0.3) ==
          doctest::Approx(std::sin(0.3) * std::cos(0.3)));
    CHECK(evaluate(parse("1.5e-1*x"), 2.0) == doctest::Approx(0.3));
  }

  TEST_CASE("textbook derivatives") {
    const Expr d = differentiate(parse("sinh(x)"));
    CHECK(d.op() == Op::Cosh);
    CHECK(d.children()[0].op() == Op::Variable);

    const Expr c = differentiate(Expr::constant(3.5));
    CHECK(c.is_constant(0.0));

    const Expr dt = differentiate(parse("tanh(x)"));
    const double h = 1e-5;
    const double fd = (std::tanh(0.7 + h) - std::tanh(0.7 - h)) / (2 * h);
    CHECK(std::fabs(evaluate(dt, 0.7) - fd) <= 1e-9);
    CHECK(evaluate(dt, 0.7) == doctest::Approx(1.0 - std::tanh(0.7) * std::tanh(0.7)));
  }

  TEST_CASE("third derivatives exist for every supported function") {
    for (const char* src : {"exp(x)", "sin(x)", "cos(x)", "sinh(x)", "cosh(x)", "tanh(x)",
                            "sqrt(x)", "ln(x)", "x^2.5", "1/x", "x*x - x", "-x"}) {
      CAPTURE(src);
      const Expr e = parse(src);
      const Expr d3 = differentiate(e, 3);
      const double x = 1.3, h = 1e-3;
      const Expr d2 = differentiate(e, 2);
      const double fd = (evaluate(d2, x + h) - evaluate(d2, x - h)) / (2 * h);
      CHECK(evaluate(d3, x) == doctest::Approx(fd).epsilon(1e-5));
    }
  }

  TEST_CASE("evaluate contract") {
    CHECK(evaluate(parse("exp(-x^2)"), 0.0) == 1.0);
    CHECK(evaluate(parse("tanh(x)"), 1e9) == 1.0);
    CHECK_THROWS_AS(evaluate(parse("1/x"), 0.0), DomainError);
    CHECK_THROWS_AS(evaluate(parse("ln(x)"), -1.0), DomainError);
    CHECK_THROWS_AS(evaluate(parse("sqrt(x)"), -1.0), DomainError);
    CHECK_THROWS_AS(evaluate(parse("x^0.5"), -2.0), DomainError);
    CHECK_THROWS_AS(evaluate(parse("exp(2*x^2)"), 30.0), OverflowError);
    CHECK(evaluate(parse("x^3"), -2.0) == doctest::Approx(-8.0));
  }

  TEST_CASE("constants must be finite") {
    CHECK_THROWS(Expr::constant(NAN));
    CHECK_THROWS(Expr::constant(INFINITY));
  }

  TEST_CASE("printing round-trips on random trees") {
    Rng rng(11);
    int compared = 0;
    for (int t = 0; t < 200; ++t) {
      const Expr e = testing_support::random_tree(rng, 4);
      const Expr back = parse(to_string(e));
      for (int k = 0; k < 100; ++k) {
        const double x = testing_support::uniform(rng, -5, 5);
        const double a = try_eval(e, x), b = try_eval(back, x);
        CAPTURE(to_string(e));
        CAPTURE(x);
        CHECK(std::isnan(a) == std::isnan(b));
        if (std::isnan(a) || std::isnan(b)) continue;
        CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)));
        ++compared;
      }
    }
    CHECK(compared > 5000);
  }

  TEST_CASE("symbolic derivatives agree with central differences at order 2") {
    Rng rng(23);
    int compared = 0;
    for (int t = 0; t < 150; ++t) {
      const Expr e = testing_support::random_tree(rng, 4);
      const Expr d1 = differentiate(e);
      const Expr d3 = differentiate(e, 3);
      for (int k = 0; k < 50; ++k) {
        const double x = testing_support::uniform(rng, -3, 3);
        const double f = try_eval(e, x), d = try_eval(d1, x), third = try_eval(d3, x);
        // Keep away from domain edges and from regions too steep for a
        // double-precision difference quotient.
        if (!std::isfinite(f) || !std::isfinite(d) || !std::isfinite(third)) continue;
        if (!std::isfinite(try_eval(d3, x - 2e-3)) || !std::isfinite(try_eval(d3, x + 2e-3)))
          continue;
        if (std::fabs(f) > 1e4 || std::fabs(third) > 1e4) continue;
        for (double h : {1e-3, 1e-4}) {
          const double err = std::fabs(central_difference(e, x, h) - d);
          const double bound = h * h * (1.1 * std::fabs(third) / 6.0 + 1.0) +
                               1e-13 * (1.0 + std::fabs(f)) / h;
          CAPTURE(to_string(e));
          CAPTURE(x);
          CAPTURE(h);
          CHECK(err <= bound);
        }
        ++compared;
      }
    }
    CHECK(compared > 2000);
  }

  TEST_CASE("differentiation is linear") {
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
      const Expr e1 = testing_support::random_tree(rng, 3);
      const Expr e2 = testing_support::random_tree(rng, 3);
      const double a = testing_support::uniform(rng, -2, 2);
      const Expr lhs = differentiate(a * e1 + e2);
      const Expr rhs = a * differentiate(e1) + differentiate(e2);
      for (int k = 0; k < 10; ++k) {
        const double x = testing_support::uniform(rng, -3, 3);
        const double l = try_eval(lhs, x), r = try_eval(rhs, x);
        if (!std::isfinite(l) || !std::isfinite(r)) continue;
        CHECK(std::fabs(l - r) <= 1e-12 * std::max(1.0, std::fabs(l)));
      }
    }
  }

  TEST_CASE("taylor coefficients match repeated differentiation") {
    for (const char* src : {"tanh(x)", "sinh(x)*exp(-x^2)", "sqrt(1+x^2)", "ln(2+sin(x))",
                            "x^2.5", "1/(1+x^2)", "cosh(x)^-0.5"}) {
      CAPTURE(src);
      const Expr e = parse(src);
      const double x0 = 0.8;
      const auto c = taylor_coefficients(e, x0, 5);
      REQUIRE(c.size() == 6);
      double factorial = 1.0;
      for (int k = 0; k <= 5; ++k) {
        if (k > 0) factorial *= k;
        const double expected = evaluate(differentiate(e, k), x0) / factorial;
        CHECK(c[k] == doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }
}
