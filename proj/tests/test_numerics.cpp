#include <doctest.h>

#include <cmath>
#include <limits>

#include "outage_alloc/numerics.hpp"
#include "support/reference.hpp"

using namespace outage_alloc;
using namespace outage_alloc::numerics;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("integrate: exponential tail over [0, inf)") {
    const double v = integrate([](double x) { return std::exp(-x); }, 0.0, kInf);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("integrate: constant on the unit interval") {
    const double v = integrate([](double) { return 1.0; }, 0.0, 1.0);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("integrate: exponential integral from -ln 0.9") {
    // frozen from the fixed-step reference: 1.77580068320442
    const double a = -std::log(0.9);
    const double v = integrate([](double x) { return std::exp(-x) / x; }, a, kInf);
    CHECK(v == doctest::Approx(1.77580068320442).epsilon(1e-9));
}

TEST_CASE("integrate: additive across a split point") {
    const auto f = [](double x) { return std::sin(3.0 * x) * std::exp(-x) + 0.25; };
    const double whole = integrate(f, 0.0, 5.0);
    const double left = integrate(f, 0.0, 1.3);
    const double right = integrate(f, 1.3, 5.0);
    CHECK(std::abs(whole - left - right) <= 2e-9 * std::abs(whole) + 2e-12);
}

TEST_CASE("integrate: diverging inverse-gain integrand is flagged") {
    // pdf(0) > 0 against 1/h: the minimum-power integral at eps = 0
    CHECK_THROWS_AS(integrate([](double h) { return std::exp(-h) / h; }, 0.0, kInf),
                    DivergentIntegral);
}

TEST_CASE("integrate: argument checks") {
    CHECK_THROWS_AS(integrate([](double) { return 0.0; }, 1.0, 1.0), InvalidParam);
    CHECK_THROWS_AS(integrate([](double) { return 0.0; }, 2.0, 1.0), InvalidParam);
}

TEST_CASE("bisect: identity and cubic endpoints") {
    CHECK(bisect([](double x) { return x; }, 0.0, 2.0, 1.0) == doctest::Approx(1.0));
    CHECK(bisect([](double x) { return x * x * x; }, 0.0, 2.0, 8.0) ==
          doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("bisect: exponential cdf quantile") {
    const double x = bisect([](double t) { return -std::expm1(-t); }, 0.0, 10.0, 0.1);
    CHECK(x == doctest::Approx(-std::log(0.9)).epsilon(1e-8));  // 0.105360515657826
}

TEST_CASE("bisect: residual bound holds") {
    Tolerance tol;
    const auto g = [](double x) { return std::atan(x); };
    const double x = bisect(g, 0.0, 10.0, 0.7, tol);
    // the width stop at rel*|x| bounds the residual by max-slope * rel * |x|
    CHECK(std::abs(g(x) - 0.7) <= 1.0 * tol.rel * std::abs(x) + tol.abs);
}

TEST_CASE("bisect: deterministic for identical inputs") {
    const auto g = [](double x) { return x * x; };
    const double a = bisect(g, 0.0, 3.0, 2.0);
    const double b = bisect(g, 0.0, 3.0, 2.0);
    CHECK(a == b);  // bit-identical
}

TEST_CASE("bisect: invalid bracket") {
    CHECK_THROWS_AS(bisect([](double x) { return x; }, 0.0, 1.0, 5.0), BracketInvalid);
}

TEST_CASE("bracket_above: doubling sequence") {
    CHECK(bracket_above([](double x) { return x; }, 0.0, 5.0) == doctest::Approx(8.0));
    CHECK(bracket_above([](double x) { return x * x; }, 0.0, 100.0) == doctest::Approx(16.0));
}

TEST_CASE("bracket_above: bounded map never reaches the target") {
    CHECK_THROWS_AS(bracket_above([](double x) { return -std::expm1(-x); }, 0.0, 2.0), NoBracket);
}

TEST_CASE("integrate agrees with the fixed-step reference on a smooth integrand") {
    const auto f = [](double x) { return std::exp(-0.7 * x) * std::cos(x); };
    const double ref = refcalc::midpoint_sum(f, 0.2, 8.0, 2'000'000);
    CHECK(integrate(f, 0.2, 8.0) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("default tolerance: OUTAGE_ALLOC_TOL override") {
    const Tolerance base = default_tolerance();
    CHECK(base.rel == doctest::Approx(1e-9));
    CHECK(base.max_iter == 60);
    setenv("OUTAGE_ALLOC_TOL", "1e-7", 1);
    const Tolerance loose = default_tolerance();
    CHECK(loose.rel == doctest::Approx(1e-7));
    CHECK(loose.abs == doctest::Approx(1e-10));
    unsetenv("OUTAGE_ALLOC_TOL");
}
