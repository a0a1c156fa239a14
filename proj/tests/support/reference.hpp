#pragma once

// Fixed-step reference computations used to freeze expected values for the
// unit and acceptance tests. Everything here is deliberately primitive
// (midpoint Riemann sums, plain interval halving) and shares no code with
// the library under test.

#include <cmath>
#include <functional>

namespace refcalc {

using Fn = std::function<double(double)>;

// Midpoint rule with n uniform steps on [a, b].
inline double midpoint_sum(const Fn& f, double a, double b, long n) {
    const double h = (b - a) / static_cast<double>(n);
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += f(a + (static_cast<double>(i) + 0.5) * h);
    return s * h;
}

// Plain interval halving for a nondecreasing map, 200 fixed halvings.
inline double solve_increasing(const Fn& g, double lo, double hi, double target) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double rate_bits(double x, double sigma2) {
    return 0.5 * std::log2(1.0 + x / sigma2);
}

// Allocation of the service-outage policy: channel inversion floor on the
// service side of the gain threshold, clamped water-filling below it.
inline double policy_alloc(double h, double lambda, double h_eps, double sigma2, double r0) {
    const double floor_inv = (std::exp2(2.0 * r0) - 1.0) * sigma2 / h;
    const double water = lambda - sigma2 / h;
    if (h >= h_eps) return std::max(water, floor_inv);
    return std::max(water, 0.0);
}

// Reference scenario: min-gain law exponential with rate beta (pdf beta e^{-beta h}).
struct ExpScenario {
    double beta;
    double sigma2;
    double r0;
    double eps;

    double h_eps() const { return -std::log1p(-eps) / beta; }
    double pdf(double h) const { return beta * std::exp(-beta * h); }
    double cdf(double h) const { return -std::expm1(-beta * h); }

    // The allocation jumps at h_eps, so integrate the two sides separately;
    // a midpoint cell straddling the jump would cost O(step) accuracy.
    double expected_power(double lambda, long n = 4'000'000) const {
        const double he = h_eps();
        const double hi = 60.0 / beta;
        Fn f = [&](double h) { return policy_alloc(h, lambda, he, sigma2, r0) * pdf(h); };
        double v = midpoint_sum(f, he, hi, n);
        if (he > 0.0) v += midpoint_sum(f, 0.0, he, n / 4 + 1);
        return v;
    }

    double capacity(double lambda, long n = 4'000'000) const {
        const double he = h_eps();
        const double hi = 60.0 / beta;
        Fn f = [&](double h) {
            const double p = policy_alloc(h, lambda, he, sigma2, r0);
            return rate_bits(h * p, sigma2) * pdf(h);
        };
        double v = midpoint_sum(f, he, hi, n);
        if (he > 0.0) v += midpoint_sum(f, 0.0, he, n / 4 + 1);
        return v;
    }

    double solve_lambda(double p_av) const {
        Fn g = [&](double lam) { return expected_power(lam, 400'000); };
        double hi = 1.0;
        while (g(hi) < p_av) hi *= 2.0;
        return solve_increasing(g, 0.0, hi, p_av);
    }

    // Minimum power: inversion floor integrated over the service region.
    double p_min(long n = 8'000'000) const {
        const double he = h_eps();
        const double hi = 60.0 / beta;
        const double c = (std::exp2(2.0 * r0) - 1.0) * sigma2;
        Fn f = [&](double h) { return c / h * pdf(h); };
        return midpoint_sum(f, he, hi, n);
    }
};

// Classical water-filling (no rate floor) on the same exponential law.
struct ExpWaterfill {
    double beta;
    double sigma2;

    double pdf(double h) const { return beta * std::exp(-beta * h); }

    double expected_power(double lambda, long n = 4'000'000) const {
        if (lambda <= 0.0) return 0.0;
        const double lo = sigma2 / lambda;
        const double hi = 60.0 / beta + lo;
        Fn f = [&](double h) { return (lambda - sigma2 / h) * pdf(h); };
        return midpoint_sum(f, lo, hi, n);
    }

    double capacity(double lambda, long n = 4'000'000) const {
        const double lo = sigma2 / lambda;
        const double hi = 60.0 / beta + lo;
        Fn f = [&](double h) { return 0.5 * std::log2(lambda * h / sigma2) * pdf(h); };
        return midpoint_sum(f, lo, hi, n);
    }

    double solve_lambda(double p_av) const {
        Fn g = [&](double lam) { return expected_power(lam, 400'000); };
        double hi = 1.0;
        while (g(hi) < p_av) hi *= 2.0;
        return solve_increasing(g, 0.0, hi, p_av);
    }
};

}  // namespace refcalc
