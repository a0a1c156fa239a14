#pragma once

// Reference capacities that bracket the service-outage capacity on a power
// sweep: ergodic capacity (pure water-filling, no rate guarantee) and
// eps-outage capacity (fixed-rate truncated channel inversion). The
// water-filling here is written independently of the policy module so sweep
// comparisons are a genuine cross-check.

#include <span>
#include <vector>

#include "outage_alloc/fading.hpp"
#include "outage_alloc/policy.hpp"

namespace outage_alloc::baselines {

struct CapacityPoint {
    double p_av;
    double c_service;  // NaN when p_av is below the feasibility threshold
    double c_ergodic;
    double c_outage;   // expected rate (1 - eps) * r of the fixed-rate scheme
};

struct SweepResult {
    double p_min;
    std::vector<CapacityPoint> points;
};

// Capacity of classical water-filling with budget p_av.
double ergodic_capacity(const fading::MinGainDistribution& d, double p_av, double sigma2);

// Largest fixed rate r sustainable by truncated channel inversion above the
// eps-quantile within budget: r = (1/2) log2(1 + p_av / (sigma2 J)) with
// J = E[1/h; h >= h_eps]. Returns the face rate r; sweep reports (1-eps) r.
double outage_capacity(const fading::MinGainDistribution& d, double p_av, double eps,
                       double sigma2);

// One CapacityPoint per grid entry (linear powers); infeasible service
// points carry NaN rather than being dropped, so curves stay aligned.
SweepResult sweep(const fading::MinGainDistribution& d, const SystemParams& base,
                  std::span<const double> p_grid);

}  // namespace outage_alloc::baselines
