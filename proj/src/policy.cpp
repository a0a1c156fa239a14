#include "outage_alloc/policy.hpp"

#include <cmath>

namespace outage_alloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Breakpoints of the allocation in h: water-filling onset sigma2/lambda on
// the outage side, inversion/water switch 2^{2 r0} sigma2 / lambda on the
// service side. Integrating the smooth pieces separately keeps the
// quadrature off the kinks and the threshold jump.
struct Pieces {
    double h_water0;  // where lambda - sigma2/h turns positive (inf if lambda = 0)
    double h_switch;  // where water-filling overtakes the inversion floor
};

Pieces pieces_for(double lambda, const SystemParams& p) {
    if (lambda <= 0.0) return {kInf, kInf};
    return {p.sigma2 / lambda, std::exp2(2.0 * p.r0) * p.sigma2 / lambda};
}

double piece_integral(const fading::RealFn& f, double a, double b,
                      const numerics::Tolerance& tol) {
    if (!(a < b)) return 0.0;
    return numerics::integrate(f, a, b, tol);
}

}  // namespace

double min_power(const fading::MinGainDistribution& d, const SystemParams& params) {
    params.validate();
    if (params.r0 == 0.0) return 0.0;
    const double h_eps = fading::quantile_of_min(d, params.eps);
    const double coeff = (std::exp2(2.0 * params.r0) - 1.0) * params.sigma2;
    try {
        return coeff * numerics::integrate([&d](double h) { return d.pdf(h) / h; }, h_eps, kInf);
    } catch (const DivergentIntegral&) {
        return kInf;
    }
}

double expected_power(double lambda, double h_thresh, const SystemParams& params,
                      const fading::MinGainDistribution& d) {
    if (!(lambda >= 0.0)) throw InvalidParam("expected_power: lambda must be >= 0");
    const numerics::Tolerance tol = numerics::default_tolerance();
    const auto [h_water0, h_switch] = pieces_for(lambda, params);
    const double cinv = (std::exp2(2.0 * params.r0) - 1.0) * params.sigma2;

    double total = 0.0;
    // outage side: [lambda - sigma2/h]^+
    if (lambda > 0.0 && h_water0 < h_thresh) {
        total += piece_integral(
            [&](double h) { return (lambda - params.sigma2 / h) * d.pdf(h); },
            std::max(h_water0, d.support_lo), h_thresh, tol);
    }
    // service side, inversion floor active
    if (params.r0 > 0.0) {
        const double inv_hi = std::max(h_switch, h_thresh);
        total += cinv * piece_integral([&](double h) { return d.pdf(h) / h; }, h_thresh,
                                       inv_hi, tol);
    }
    // service side, water-filling active
    if (lambda > 0.0) {
        const double w_lo = std::max(h_switch, h_thresh);
        total += piece_integral(
            [&](double h) { return (lambda - params.sigma2 / h) * d.pdf(h); }, w_lo, kInf, tol);
    }
    return total;
}

double expected_power(const Policy& pol, const fading::MinGainDistribution& d) {
    return expected_power(pol.lambda, pol.h_thresh, pol.params, d);
}

Policy solve(const fading::MinGainDistribution& d, const SystemParams& params) {
    params.validate();
    const double p_min = min_power(d, params);
    if (!(params.p_av >= p_min * (1.0 - 1e-9)))
        throw InfeasiblePower(params.p_av, p_min);

    Policy pol;
    pol.params = params;
    pol.min_dist = d;
    pol.h_thresh = fading::quantile_of_min(d, params.eps);
    pol.p_min = p_min;

    if (params.p_av <= p_min) {
        pol.lambda = 0.0;  // canonical solution at the feasibility boundary
        return pol;
    }

    const auto budget_of = [&](double lambda) {
        return expected_power(lambda, pol.h_thresh, params, d);
    };
    const double hi = numerics::bracket_above(budget_of, 0.0, params.p_av);
    numerics::Tolerance tol = numerics::default_tolerance();
    tol.abs = std::max(tol.abs, 1e-9 * params.p_av);
    tol.rel = 1e-12;
    tol.max_iter = 200;
    pol.lambda = numerics::bisect(budget_of, 0.0, hi, params.p_av, tol);
    return pol;
}

double allocate(const Policy& pol, double h_min) {
    if (!(h_min > 0.0)) throw InvalidParam("allocate: h_min must be > 0");
    const double water = pol.lambda - pol.params.sigma2 / h_min;
    if (h_min >= pol.h_thresh)
        return std::max(water, inversion_power(pol.params, h_min));
    return std::max(water, 0.0);
}

double expected_capacity(const Policy& pol, const fading::MinGainDistribution& d) {
    const numerics::Tolerance tol = numerics::default_tolerance();
    const SystemParams& p = pol.params;
    const auto [h_water0, h_switch] = pieces_for(pol.lambda, p);

    // On water-filled regions R(h * (lambda - sigma2/h)) = (1/2) log2(lambda h / sigma2);
    // on the inversion floor the rate is exactly r0.
    const auto water_rate = [&](double h) {
        return 0.5 * std::log2(pol.lambda * h / p.sigma2) * d.pdf(h);
    };

    double total = 0.0;
    if (pol.lambda > 0.0 && h_water0 < pol.h_thresh) {
        total += piece_integral(water_rate, std::max(h_water0, d.support_lo), pol.h_thresh, tol);
    }
    if (p.r0 > 0.0) {
        const double inv_hi = std::max(h_switch, pol.h_thresh);
        const double mass = d.sf(pol.h_thresh) - (std::isinf(inv_hi) ? 0.0 : d.sf(inv_hi));
        total += p.r0 * mass;
    }
    if (pol.lambda > 0.0) {
        const double w_lo = std::max(h_switch, pol.h_thresh);
        total += piece_integral(water_rate, w_lo, kInf, tol);
    }
    return total;
}

double outage_probability(const Policy& pol, const fading::MinGainDistribution& d) {
    const SystemParams& p = pol.params;
    if (p.r0 == 0.0) return 0.0;
    // Below the threshold, rate falls short of r0 exactly when
    // h (lambda - sigma2/h) < (2^{2 r0} - 1) sigma2, i.e. h < 2^{2 r0} sigma2 / lambda.
    double cut = pol.h_thresh;
    if (pol.lambda > 0.0)
        cut = std::min(cut, std::exp2(2.0 * p.r0) * p.sigma2 / pol.lambda);
    return d.cdf(cut);
}

}  // namespace outage_alloc
