#include "outage_alloc/baselines.hpp"

#include <cmath>
#include <limits>

#include "outage_alloc/numerics.hpp"

namespace outage_alloc::baselines {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double waterfill_budget(const fading::MinGainDistribution& d, double lambda, double sigma2) {
    if (lambda <= 0.0) return 0.0;
    const double onset = sigma2 / lambda;
    return numerics::integrate(
        [&](double h) { return (lambda - sigma2 / h) * d.pdf(h); },
        std::max(onset, d.support_lo), kInf);
}

}  // namespace

double ergodic_capacity(const fading::MinGainDistribution& d, double p_av, double sigma2) {
    if (p_av <= 0.0) return 0.0;
    const auto budget_of = [&](double lam) { return waterfill_budget(d, lam, sigma2); };
    const double hi = numerics::bracket_above(budget_of, 0.0, p_av);
    numerics::Tolerance tol = numerics::default_tolerance();
    tol.abs = std::max(tol.abs, 1e-10 * p_av);
    tol.rel = 1e-12;
    tol.max_iter = 200;
    const double lambda = numerics::bisect(budget_of, 0.0, hi, p_av, tol);
    const double onset = sigma2 / lambda;
    return numerics::integrate(
        [&](double h) { return 0.5 * std::log2(lambda * h / sigma2) * d.pdf(h); },
        std::max(onset, d.support_lo), kInf);
}

double outage_capacity(const fading::MinGainDistribution& d, double p_av, double eps,
                       double sigma2) {
    if (p_av <= 0.0) return 0.0;
    const double h_eps = fading::quantile_of_min(d, eps);
    const double j = numerics::integrate([&](double h) { return d.pdf(h) / h; }, h_eps, kInf);
    return 0.5 * std::log2(1.0 + p_av / (sigma2 * j));
}

SweepResult sweep(const fading::MinGainDistribution& d, const SystemParams& base,
                  std::span<const double> p_grid) {
    SystemParams params = base;
    params.p_av = 0.0;  // per-point budgets come from the grid
    params.validate();

    SweepResult result;
    result.p_min = min_power(d, params);
    result.points.reserve(p_grid.size());

    for (const double p : p_grid) {
        CapacityPoint pt{p, kNaN, 0.0, 0.0};
        pt.c_ergodic = ergodic_capacity(d, p, params.sigma2);
        pt.c_outage = (1.0 - params.eps) * outage_capacity(d, p, params.eps, params.sigma2);
        if (p >= result.p_min * (1.0 - 1e-9)) {
            SystemParams sp = params;
            sp.p_av = p;
            pt.c_service = expected_capacity(solve(d, sp), d);
        }
        result.points.push_back(pt);
    }
    return result;
}

}  // namespace outage_alloc::baselines
