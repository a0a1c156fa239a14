#pragma once

#include <stdexcept>
#include <string>

namespace outage_alloc {

// Invalid argument / configuration value.
struct InvalidParam : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyList : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Iteration or subdivision budget exhausted without meeting tolerance.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Partial integrals keep growing by a non-shrinking amount near an endpoint.
struct DivergentIntegral : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Root bracket precondition g(lo) <= target <= g(hi) violated.
struct BracketInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometric doubling hit its cap without reaching the target.
struct NoBracket : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Average power budget below the minimum power required by the outage constraint.
struct InfeasiblePower : std::runtime_error {
    double p_av;
    double p_min;
    InfeasiblePower(double p_av_, double p_min_)
        : std::runtime_error("infeasible power budget: p_av = " + std::to_string(p_av_) +
                             " < p_min = " + std::to_string(p_min_)),
          p_av(p_av_),
          p_min(p_min_) {}
};

// No discrete outage set satisfies the power budget.
struct InfeasibleDiscrete : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace outage_alloc
