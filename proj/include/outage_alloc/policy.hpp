#pragma once

// Service-outage-constrained power allocation over the min-gain law:
// feasibility threshold, minimum power, water level, the allocation rule
// (water-filling above the threshold with a channel-inversion floor,
// clamped water-filling below it), and its achieved capacity and outage.

#include <cmath>
#include <limits>

#include "outage_alloc/errors.hpp"
#include "outage_alloc/fading.hpp"
#include "outage_alloc/numerics.hpp"

namespace outage_alloc {

struct SystemParams {
    double sigma2;  // noise variance, linear
    double r0;      // basic service rate, bits/symbol
    double eps;     // outage budget
    double p_av;    // average power budget, linear

    void validate() const {
        if (!(sigma2 > 0.0)) throw InvalidParam("SystemParams: sigma2 must be > 0");
        if (!(r0 >= 0.0)) throw InvalidParam("SystemParams: r0 must be >= 0");
        if (!(eps >= 0.0) || eps >= 1.0) throw InvalidParam("SystemParams: need 0 <= eps < 1");
        if (!(p_av >= 0.0)) throw InvalidParam("SystemParams: p_av must be >= 0");
    }
};

// R(x) = (1/2) log2(1 + x / sigma2), bits per symbol.
inline double rate_bits(double x, double sigma2) { return 0.5 * std::log2(1.0 + x / sigma2); }

// Power that achieves exactly r0 at gain h: (2^{2 r0} - 1) sigma2 / h.
inline double inversion_power(const SystemParams& p, double h) {
    return (std::exp2(2.0 * p.r0) - 1.0) * p.sigma2 / h;
}

struct Policy {
    double h_thresh;  // service threshold: eps-quantile of the min-gain law
    double lambda;    // water level; 0 at the feasibility boundary
    double p_min;     // minimum average power for feasibility
    SystemParams params;
    fading::MinGainDistribution min_dist;
};

// Minimum average power required by the outage constraint; +infinity when
// the inversion integral diverges (eps = 0 with positive density at 0).
double min_power(const fading::MinGainDistribution& d, const SystemParams& params);

// Solve for the policy. Throws InfeasiblePower when p_av < p_min (beyond a
// 1e-9 relative guard); p_av at the boundary yields lambda = 0.
Policy solve(const fading::MinGainDistribution& d, const SystemParams& params);

// Allocation at min gain h: max{lambda - sigma2/h, inversion} on the service
// region, [lambda - sigma2/h]^+ below the threshold. Always >= 0.
double allocate(const Policy& pol, double h_min);

// E[allocation] under the min-gain law for a given water level/threshold.
// Nondecreasing in lambda; equals p_min at lambda = 0.
double expected_power(double lambda, double h_thresh, const SystemParams& params,
                      const fading::MinGainDistribution& d);
double expected_power(const Policy& pol, const fading::MinGainDistribution& d);

// E[R(h * allocation)] under the min-gain law.
double expected_capacity(const Policy& pol, const fading::MinGainDistribution& d);

// Exact outage probability of the solved policy; always <= eps.
double outage_probability(const Policy& pol, const fading::MinGainDistribution& d);

}  // namespace outage_alloc
