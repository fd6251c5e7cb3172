#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rfrac/expr.hpp"

using namespace rfrac;

TEST_CASE("expression parsing and evaluation") {
    CHECK(Expression::parse("1 + 2*3").eval(0.0) == doctest::Approx(7.0));
    CHECK(Expression::parse("(1 + 2)*3").eval(0.0) == doctest::Approx(9.0));
    CHECK(Expression::parse("2^3^2").eval(0.0) == doctest::Approx(512.0)); // right-assoc
    CHECK(Expression::parse("-x^2").eval(3.0) == doctest::Approx(-9.0));
    CHECK(Expression::parse("x/4 - 1").eval(10.0) == doctest::Approx(1.5));
    CHECK(Expression::parse("exp(0)").eval(0.0) == doctest::Approx(1.0));
    CHECK(Expression::parse("abs(-2.5)").eval(0.0) == doctest::Approx(2.5));
    CHECK(Expression::parse("min(3, x)").eval(1.0) == doctest::Approx(1.0));
    CHECK(Expression::parse("max(0, x)").eval(-0.5) == doctest::Approx(0.0));
    CHECK(Expression::parse("pi").eval(0.0) == doctest::Approx(3.14159265358979));
    CHECK(Expression::parse("max(0, min(x, 1))").eval(0.25) == doctest::Approx(0.25));
    CHECK(Expression::parse("1e-3 * x").eval(2.0) == doctest::Approx(0.002));
}

TEST_CASE("expression errors") {
    CHECK_THROWS_AS(Expression::parse("2 +"), std::invalid_argument);
    CHECK_THROWS_AS(Expression::parse("foo(3)"), std::invalid_argument);
    CHECK_THROWS_AS(Expression::parse("min(1)"), std::invalid_argument);
    CHECK_THROWS_AS(Expression::parse("(1"), std::invalid_argument);
    CHECK_THROWS_AS(Expression::parse("1 2"), std::invalid_argument);
    CHECK_THROWS_AS(Expression::parse("y + 1"), std::invalid_argument);
    CHECK_THROWS_AS(Expression::parse("exp 3"), std::invalid_argument);
}

TEST_CASE("expressions keep their source") {
    const auto e = Expression::parse("max(0,x)");
    CHECK(e.source() == "max(0,x)");
}
