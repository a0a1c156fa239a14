#pragma once

// Continuous channel-gain laws and their composition into the minimum-gain
// law across independent users. Analytic-first: pdf/cdf/quantile are
// callables so expectations can be taken by quadrature; the quantile falls
// back to bisection on the cdf when no closed form exists.

#include <functional>
#include <string>
#include <vector>

#include "outage_alloc/errors.hpp"
#include "outage_alloc/rng.hpp"

namespace outage_alloc::fading {

using RealFn = std::function<double(double)>;

struct GainDistribution {
    RealFn pdf;
    RealFn cdf;
    RealFn sf;        // survival 1 - cdf, kept separate so deep tails stay exact
    RealFn quantile;  // p in [0, 1)
    std::function<double(rng::UniformStream&)> sample;
    double mean_gain = 0.0;
    double support_lo = 0.0;
    double exp_rate = 0.0;  // > 0 iff exponential with this rate; enables closed forms
};

// Law of min_i h_i over independent per-user laws. The composed law is
// itself a gain distribution; `sample` draws every part and takes the min.
struct MinGainDistribution : GainDistribution {
    std::vector<GainDistribution> parts;
};

// Exponential gain with mean omega (Rayleigh amplitude fading).
GainDistribution exponential_gain(double omega);

// Gain law from a two-column "gain cdf" table: strictly increasing in both
// columns, first cdf 0, last >= 0.9999. The cdf column is scaled by its last
// entry, giving a continuous law on [first gain, last gain] with a
// piecewise-linear cdf.
GainDistribution tabulated_gain(const std::vector<double>& gains,
                                const std::vector<double>& cdf_values);

// Parse the tabulated-law text format (see above); `origin` labels errors.
GainDistribution load_tabulated_gain(const std::string& path);

MinGainDistribution min_gain(std::vector<GainDistribution> parts);

// eps-quantile of the min-gain law: Pr{min <= h} = eps. eps = 0 returns the
// support infimum.
double quantile_of_min(const MinGainDistribution& d, double eps);

}  // namespace outage_alloc::fading
