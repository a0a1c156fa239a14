#pragma once

// Shared numerical primitives: adaptive quadrature on finite and
// semi-infinite intervals, monotone root finding, geometric bracketing.

#include <cstddef>
#include <functional>
#include <limits>

#include "outage_alloc/errors.hpp"

namespace outage_alloc::numerics {

using Fn = std::function<double(double)>;

struct Tolerance {
    double rel = 1e-9;
    double abs = 1e-12;
    int max_iter = 60;                       // bisection halvings
    std::size_t max_subintervals = 1'000'000;  // quadrature budget

    void validate() const {
        if (!(rel > 0.0) || !(abs > 0.0) || max_iter < 1)
            throw InvalidParam("Tolerance: rel > 0, abs > 0, max_iter >= 1 required");
    }
};

// Default tolerance; OUTAGE_ALLOC_TOL in the environment overrides rel
// (abs follows as rel * 1e-3).
Tolerance default_tolerance();

// Integral of f over (a, b), b may be +infinity. Endpoints are never
// evaluated. Result I satisfies |I - integral| <= max(tol.abs, tol.rel*|I|).
// Throws NonConvergence (budget exhausted) or DivergentIntegral (partial
// sums toward an endpoint do not shrink under dyadic refinement).
double integrate(const Fn& f, double a, double b, const Tolerance& tol = default_tolerance());

// Root of g(x) = target for monotone nondecreasing g with g(lo) <= target <= g(hi).
// Stops when |g(x) - target| <= tol.abs or the interval width <= tol.rel*|x|.
double bisect(const Fn& g, double lo, double hi, double target,
              const Tolerance& tol = default_tolerance());

// Smallest probed hi = lo + 2^k with g(hi) >= target, doubling from lo + 1.
// Throws NoBracket once the doubling cap is exceeded.
double bracket_above(const Fn& g, double lo, double target, int max_doublings = 64);

}  // namespace outage_alloc::numerics
