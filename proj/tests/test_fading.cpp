#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "outage_alloc/fading.hpp"
#include "outage_alloc/numerics.hpp"
#include "outage_alloc/rng.hpp"
#include "support/stats.hpp"

using namespace outage_alloc;
using namespace outage_alloc::fading;

namespace {

// deterministic uniform source driven by mt19937_64, independent of the
// library's counter-based streams
struct Mt19937Stream final : rng::UniformStream {
    std::mt19937_64 gen;
    explicit Mt19937Stream(std::uint64_t seed) : gen(seed) {}
    double next() override {
        return (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53;
    }
};

GainDistribution ramp_table() {
    // piecewise-linear cdf over [0.5, 4]
    return tabulated_gain({0.5, 1.0, 2.0, 4.0}, {0.0, 0.25, 0.7, 1.0});
}

}  // namespace

TEST_CASE("exponential gain: boundary values") {
    const auto d = exponential_gain(1.0);
    CHECK(d.cdf(0.0) == 0.0);
    CHECK(d.quantile(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(exponential_gain(2.0).pdf(0.0) == doctest::Approx(0.5));
    CHECK(d.mean_gain == doctest::Approx(1.0));
    CHECK_THROWS_AS(exponential_gain(0.0), InvalidParam);
    CHECK_THROWS_AS(exponential_gain(-1.0), InvalidParam);
}

TEST_CASE("gain law consistency: cdf increments match integrated pdf") {
    numerics::Tolerance tol;
    for (const auto& d : {exponential_gain(0.7), ramp_table()}) {
        for (const auto [a, b] : {std::pair{0.6, 1.1}, std::pair{1.2, 2.3}, std::pair{0.55, 3.3}}) {
            const double inc = d.cdf(b) - d.cdf(a);
            const double integral = numerics::integrate(d.pdf, a, b, tol);
            CHECK(std::abs(inc - integral) <= 1e-8);
        }
    }
}

TEST_CASE("gain law consistency: quantile inverts the cdf") {
    for (const auto& d : {exponential_gain(1.3), ramp_table()}) {
        for (double x : {0.6, 0.9, 1.7, 2.9}) {
            CHECK(d.quantile(d.cdf(x)) == doctest::Approx(x).epsilon(1e-8));
        }
    }
}

TEST_CASE("min gain: iid exponential closure") {
    std::vector<GainDistribution> parts;
    for (int i = 0; i < 4; ++i) parts.push_back(exponential_gain(1.0));
    const auto d = min_gain(parts);
    const auto ref = exponential_gain(0.25);
    for (double x = 0.05; x < 3.0; x += 0.1) {
        CHECK(std::abs(d.cdf(x) - ref.cdf(x)) <= 1e-12);
        CHECK(std::abs(d.pdf(x) - ref.pdf(x)) <= 1e-12 * ref.pdf(0.0));
    }
}

TEST_CASE("min gain: single part is the identity") {
    const auto part = exponential_gain(1.7);
    const auto d = min_gain({part});
    for (double x = 0.0; x < 5.0; x += 0.25) CHECK(d.cdf(x) == doctest::Approx(part.cdf(x)));
}

TEST_CASE("min gain: exponential(1) and exponential(2) compose to mean 2/3") {
    const auto d = min_gain({exponential_gain(1.0), exponential_gain(2.0)});
    // rates add: 1 + 1/2, so the min is exponential with mean 2/3
    for (double x = 0.1; x < 4.0; x += 0.3) {
        const double expect = 1.0 - std::exp(-x) * std::exp(-x / 2.0);
        CHECK(d.cdf(x) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(d.mean_gain == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // empirical check: 10^6 min-of-pair draws against the composed cdf
    Mt19937Stream stream(0xFEED5EEDULL);
    const auto e1 = exponential_gain(1.0);
    const auto e2 = exponential_gain(2.0);
    const std::size_t n = 1'000'000;
    std::size_t below = 0;
    const double probe = 0.5;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::min(e1.sample(stream), e2.sample(stream));
        if (m <= probe) ++below;
    }
    const double p_hat = static_cast<double>(below) / static_cast<double>(n);
    const double p = d.cdf(probe);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    CHECK(std::abs(p_hat - p) <= 4.0 * se);
}

TEST_CASE("min gain: product-form cdf for mixed parts") {
    const auto d = min_gain({exponential_gain(1.0), ramp_table(), exponential_gain(0.5)});
    const std::vector<const GainDistribution*> parts = {&d.parts[0], &d.parts[1], &d.parts[2]};
    for (int k = 0; k < 100; ++k) {
        const double x = 0.02 + 0.05 * k;
        double sf = 1.0;
        for (const auto* p : parts) sf *= 1.0 - p->cdf(x);
        CHECK(std::abs(d.cdf(x) - (1.0 - sf)) <= 1e-10);
    }
}

TEST_CASE("min gain: pdf matches the numerical cdf derivative") {
    const auto d = min_gain({exponential_gain(1.0), ramp_table()});
    for (double x : {0.6, 0.8, 1.4, 1.9, 3.0}) {
        const double dx = 1e-6;
        const double deriv = (d.cdf(x + dx) - d.cdf(x - dx)) / (2.0 * dx);
        CHECK(d.pdf(x) == doctest::Approx(deriv).epsilon(1e-6));
    }
}

TEST_CASE("min gain: empty part list rejected") {
    CHECK_THROWS_AS(min_gain({}), EmptyList);
}

TEST_CASE("min gain sampler: KS test against the composed cdf") {
    const auto d = min_gain({exponential_gain(1.0), exponential_gain(2.0), ramp_table()});
    Mt19937Stream stream(2024);
    const std::size_t n = 100'000;
    std::vector<double> sample(n);
    for (auto& v : sample) v = d.sample(stream);
    const double ks = teststats::ks_statistic(std::move(sample), d.cdf);
    CHECK(ks < teststats::ks_critical_1pct(n));
}

TEST_CASE("quantile_of_min: closed form and generic bisection agree with hand values") {
    const auto d4 = min_gain(std::vector<GainDistribution>(4, exponential_gain(1.0)));
    SUBCASE("exponential closed form") {
        for (double eps : {0.01, 0.1, 0.5}) {
            CHECK(quantile_of_min(d4, eps) ==
                  doctest::Approx(-0.25 * std::log1p(-eps)).epsilon(1e-12));
        }
    }
    SUBCASE("eps = 0 returns the support infimum") {
        CHECK(quantile_of_min(d4, 0.0) == 0.0);
    }
    SUBCASE("single exponential at eps = 0.1") {
        const auto d1 = min_gain({exponential_gain(1.0)});
        CHECK(quantile_of_min(d1, 0.1) ==
              doctest::Approx(0.105360515657826).epsilon(1e-10));  // -ln 0.9
    }
    SUBCASE("generic path: cdf of the quantile returns eps") {
        const auto d = min_gain({exponential_gain(1.0), ramp_table()});
        for (double eps : {0.05, 0.3, 0.8}) {
            const double h = quantile_of_min(d, eps);
            CHECK(std::abs(d.cdf(h) - eps) <= 1e-10);
        }
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(quantile_of_min(d4, 1.0), InvalidParam);
        CHECK_THROWS_AS(quantile_of_min(d4, -0.1), InvalidParam);
    }
}

TEST_CASE("tabulated law: format validation") {
    CHECK_THROWS_AS(tabulated_gain({1.0, 0.5}, {0.0, 1.0}), InvalidParam);   // gains not increasing
    CHECK_THROWS_AS(tabulated_gain({0.5, 1.0}, {0.1, 1.0}), InvalidParam);   // first cdf not 0
    CHECK_THROWS_AS(tabulated_gain({0.5, 1.0}, {0.0, 0.9}), InvalidParam);   // last cdf too small
    CHECK_THROWS_AS(tabulated_gain({0.5}, {0.0}), InvalidParam);             // single row
}

TEST_CASE("tabulated law: file round trip with tail renormalization") {
    const std::string path = "tab_law_test.txt";
    {
        std::ofstream out(path);
        out << "# gain cdf\n";
        out << "0.0 0.0\n0.5 0.30\n1.5 0.80\n3.0 0.99995\n";
    }
    const auto d = load_tabulated_gain(path);
    CHECK(d.cdf(3.0) == doctest::Approx(1.0));
    CHECK(d.cdf(0.5) == doctest::Approx(0.30 / 0.99995));
    CHECK(d.quantile(d.cdf(1.1)) == doctest::Approx(1.1).epsilon(1e-10));
    CHECK(d.mean_gain == doctest::Approx(
        0.5 * (1.0 - 0.5 * (0.0 + 0.30 / 0.99995)) +
        1.0 * (1.0 - 0.5 * (0.30 + 0.80) / 0.99995) +
        1.5 * (1.0 - 0.5 * (0.80 + 0.99995) / 0.99995)).epsilon(1e-12));
    std::remove(path.c_str());
}

TEST_CASE("tabulated law: parse error carries the line number") {
    const std::string path = "tab_law_bad.txt";
    {
        std::ofstream out(path);
        out << "0.0 0.0\nnot_a_number 0.5\n";
    }
    try {
        load_tabulated_gain(path);
        FAIL("expected InvalidParam");
    } catch (const InvalidParam& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    std::remove(path.c_str());
}
