#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pseudospec/errors.hpp"
#include "pseudospec/grid.hpp"

using namespace pseudospec;

namespace {

std::vector<double> sample(const Grid& g, double (*fn)(double)) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = fn(g.x(i));
  return v;
}

double max_antiderivative_error(std::size_t n) {
  const Grid g(-2.0, 2.0, n);
  const auto F = cumulative_integral(sample(g, [](double x) { return std::cosh(x); }), g,
                                     g.midpoint_index());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst, std::fabs(F[i] - std::sinh(g.x(i))));
  return worst;
}

FieldBuilder example3_phi(double h) {
  return [h](double L) {
    const std::size_t n = 2 * static_cast<std::size_t>(std::lround(L / h)) + 1;
    const Grid g(-L, L, n);
    std::vector<std::complex<double>> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double c = std::cosh(g.x(i));
      v[i] = std::polar(1.0 / std::sqrt(c), -std::log(c));
    }
    return ComplexField(g, v);
  };
}

FieldBuilder example2_phi(double h) {
  return [h](double L) {
    const std::size_t n = 2 * static_cast<std::size_t>(std::lround(L / h)) + 1;
    const Grid g(-L, L, n);
    std::vector<std::complex<double>> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = std::polar(std::cosh(0.5 * g.x(i)), -std::cosh(g.x(i)));
    return ComplexField(g, v);
  };
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("grid invariants") {
    const Grid g(-1.0, 1.0, 5);
    CHECK(g.spacing() == doctest::Approx(0.5));
    CHECK(g.midpoint_index() == 2);
    CHECK(g.x(2) == 0.0);
    CHECK(g.x(4) == 1.0);
    CHECK(g.first_interior() == 2);
    CHECK_THROWS_AS(Grid(-1.0, 1.0, 4), ConfigError);
    CHECK_THROWS_AS(Grid(1.0, -1.0, 5), ConfigError);
    CHECK_THROWS_AS(Grid(-1.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(Grid(-1.0, 1.0, 9, 0), ConfigError);
    const Grid r = Grid(-1.0, 1.0, 5).refined();
    CHECK(r.size() == 9);
    CHECK(r.spacing() == doctest::Approx(0.25));
  }

  TEST_CASE("complex fields reject non-finite samples") {
    const Grid g(0.0, 1.0, 3);
    CHECK_THROWS_AS(ComplexField(g, {1.0, NAN, 0.0}), OverflowError);
    CHECK_THROWS(ComplexField(g, {1.0, 0.0}));
  }

  TEST_CASE("hand trapezoid on 2x") {
    const Grid g(0.0, 1.0, 3);
    const auto F = cumulative_integral(std::vector<double>{0.0, 1.0, 2.0}, g, 0);
    REQUIRE(F.size() == 3);
    CHECK(F[0] == 0.0);
    CHECK(F[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(F[2] == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("cosh integrates to sinh from the midpoint") {
    const Grid g(-2.0, 2.0, 4001);
    const auto F = cumulative_integral(sample(g, [](double x) { return std::cosh(x); }), g,
                                       g.midpoint_index());
    CHECK(F[g.midpoint_index()] == 0.0);
    CHECK(std::fabs(F.back() - std::sinh(2.0)) <= 1e-5);
    CHECK(std::fabs(F.front() + std::sinh(2.0)) <= 1e-5);
  }

  TEST_CASE("zero samples give zero") {
    const Grid g(-1.0, 1.0, 11);
    for (double v : cumulative_integral(std::vector<double>(11, 0.0), g, 5)) CHECK(v == 0.0);
  }

  TEST_CASE("antiderivative error falls at second order") {
    for (std::size_t n : {101u, 201u, 401u}) {
      const double ratio = max_antiderivative_error(n) / max_antiderivative_error(2 * n - 1);
      CAPTURE(n);
      CHECK(ratio >= 4.0 * 0.8);
      CHECK(ratio <= 4.0 * 1.2);
    }
  }

  TEST_CASE("trapezoid total matches the closed form") {
    const Grid g(0.0, std::numbers::pi, 2001);
    CHECK(trapezoid(sample(g, [](double x) { return std::sin(x); }), g) ==
          doctest::Approx(2.0).epsilon(1e-6));
  }

  TEST_CASE("phase-twisted sech is normalizable with total pi") {
    const std::vector<double> widths{4, 8, 16, 24};
    const auto r = l2_norm_growth(example3_phi(0.01), widths);
    CHECK(r.verdict == Normalizability::Normalizable);
    CHECK(std::fabs(r.integrals.back() - std::numbers::pi) <= 1e-4);
    // I(L) against its closed form 4 atan(tanh(L/2)).
    for (std::size_t k = 0; k < widths.size(); ++k)
      CHECK(r.integrals[k] ==
            doctest::Approx(4.0 * std::atan(std::tanh(widths[k] / 2.0))).epsilon(1e-5));
  }

  TEST_CASE("widths up to 16 leave the sech total close to pi") {
    const std::vector<double> widths{4, 8, 12, 16};
    const auto r = l2_norm_growth(example3_phi(0.01), widths);
    CHECK(std::fabs(r.integrals.back() - std::numbers::pi) <= 1e-4);
    CHECK(r.verdict != Normalizability::NotNormalizable);
  }

  TEST_CASE("cosh(x/2) kernel state is not normalizable") {
    const auto r = l2_norm_growth(example2_phi(0.01), std::vector<double>{4, 8, 12, 16});
    CHECK(r.verdict == Normalizability::NotNormalizable);
  }

  TEST_CASE("overflowing builders count as divergence") {
    const FieldBuilder b = [](double) -> ComplexField { throw OverflowError("too big"); };
    const auto r = l2_norm_growth(b, std::vector<double>{4, 8, 12, 16});
    CHECK(r.verdict == Normalizability::NotNormalizable);
    CHECK(r.overflowed);
  }

  TEST_CASE("zero field is indeterminate") {
    const FieldBuilder b = [](double L) {
      const Grid g(-L, L, 101);
      return ComplexField(g, std::vector<std::complex<double>>(101));
    };
    CHECK(l2_norm_growth(b, std::vector<double>{4, 8, 12, 16}).verdict ==
          Normalizability::Indeterminate);
  }

  TEST_CASE("I(L) is non-decreasing for random profiles") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
      const double a = std::uniform_real_distribution<double>(0.05, 2.0)(rng);
      const double p = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      const FieldBuilder b = [=](double L) {
        const std::size_t n = 2 * static_cast<std::size_t>(std::lround(L / 0.02)) + 1;
        const Grid g(-L, L, n);
        std::vector<std::complex<double>> v(n);
        for (std::size_t i = 0; i < n; ++i)
          v[i] = std::polar(std::exp(-a * std::fabs(g.x(i))) + 1e-3, p * g.x(i));
        return ComplexField(g, v);
      };
      const auto r = l2_norm_growth(b, std::vector<double>{2, 4, 6, 8, 10});
      for (std::size_t k = 1; k < r.integrals.size(); ++k)
        CHECK(r.integrals[k] >= r.integrals[k - 1]);
    }
  }
}
