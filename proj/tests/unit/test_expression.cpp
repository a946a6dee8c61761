#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "hitspec/error.hpp"
#include "hitspec/expression.hpp"

using hitspec::Expression;

TEST_CASE("expression: literals, constants and precedence") {
  CHECK(Expression::parse("1 + 2 * 3")(0.0) == doctest::Approx(7.0));
  CHECK(Expression::parse("-x^2")(3.0) == doctest::Approx(-9.0));
  CHECK(Expression::parse("2^3^2")(0.0) == doctest::Approx(512.0));
  CHECK(Expression::parse("(1 + x) / 2")(3.0) == doctest::Approx(2.0));
  CHECK(Expression::parse("pi")(0.0) == doctest::Approx(std::numbers::pi));
  CHECK(Expression::parse("e")(0.0) == doctest::Approx(std::numbers::e));
  CHECK(Expression::parse("1.5e-3 * x")(2.0) == doctest::Approx(3e-3));
}

TEST_CASE("expression: functions match the standard library") {
  hitspec::test::Gen gen(1);
  const Expression e = Expression::parse("exp(x) + ln(abs(x) + 1) + sqrt(x^2) + sin(x) * cos(x) - tanh(x)");
  for (int i = 0; i < 200; ++i) {
    const double x = gen.uniform(-5.0, 5.0);
    const double expected = std::exp(x) + std::log(std::fabs(x) + 1.0) + std::fabs(x) +
                            std::sin(x) * std::cos(x) - std::tanh(x);
    CHECK(e(x) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("expression: catalog drift texts evaluate") {
  const Expression ht = Expression::parse("-4*x/(1+x^2)");
  CHECK(ht(1.0) == doctest::Approx(-2.0));
  CHECK(ht(0.0) == 0.0);
}

TEST_CASE("expression: malformed input is rejected") {
  CHECK_THROWS_AS(Expression::parse(""), hitspec::InputError);
  CHECK_THROWS_AS(Expression::parse("1 +"), hitspec::InputError);
  CHECK_THROWS_AS(Expression::parse("(x"), hitspec::InputError);
  CHECK_THROWS_AS(Expression::parse("foo(x)"), hitspec::InputError);
  CHECK_THROWS_AS(Expression::parse("x y"), hitspec::InputError);
}
