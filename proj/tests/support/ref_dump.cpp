// Prints the reference values frozen into the test expectations.
// Build and run by hand; not registered with ctest.

#include <cstdio>

#include "reference.hpp"

using namespace refcalc;

int main() {
    std::printf("== numerics ==\n");
    {
        const double a = -std::log(0.9);
        Fn f = [](double x) { return std::exp(-x) / x; };
        // generous fixed horizon; integrand below 1e-30 past x = 60
        const double v1 = midpoint_sum(f, a, 60.0, 4'000'000);
        const double v2 = midpoint_sum(f, a, 60.0, 8'000'000);
        std::printf("exp_integral(-ln 0.9) = %.15g (refine delta %.3g)\n", v2, v2 - v1);
    }

    std::printf("== policy scenario: exp(1) min law, sigma2=1, r0=0.5, eps=0.1 ==\n");
    ExpScenario sc{1.0, 1.0, 0.5, 0.1};
    {
        std::printf("h_eps    = %.15g\n", sc.h_eps());
        const double pm1 = sc.p_min(4'000'000);
        const double pm2 = sc.p_min(8'000'000);
        std::printf("p_min    = %.15g (refine delta %.3g)\n", pm2, pm2 - pm1);
        std::printf("E[gamma](lambda=1) = %.15g\n", sc.expected_power(1.0, 8'000'000));
        const double lam = sc.solve_lambda(3.0);
        std::printf("lambda*(p_av=3) = %.15g   (power check %.15g)\n", lam,
                    sc.expected_power(lam, 8'000'000));
        std::printf("capacity(lambda*) = %.15g\n", sc.capacity(lam, 8'000'000));
    }

    std::printf("== ergodic water-filling: exp(1), sigma2=1, p_av=3 ==\n");
    {
        ExpWaterfill wf{1.0, 1.0};
        const double lam = wf.solve_lambda(3.0);
        std::printf("lambda_wf = %.15g (power check %.15g)\n", lam, wf.expected_power(lam, 8'000'000));
        std::printf("c_ergodic = %.15g\n", wf.capacity(lam, 8'000'000));
    }

    std::printf("== outage capacity: exp(1), sigma2=1, eps=0.1, p_av=3 ==\n");
    {
        const double he = -std::log(0.9);
        Fn f = [](double h) { return std::exp(-h) / h; };
        const double J = midpoint_sum(f, he, 60.0, 8'000'000);
        std::printf("J = %.15g, face rate r = %.15g, weighted (1-eps)r = %.15g\n", J,
                    0.5 * std::log2(1.0 + 3.0 / J), 0.9 * 0.5 * std::log2(1.0 + 3.0 / J));
    }

    std::printf("== outage probability case: exp(1), sigma2=1, r0=0.5, eps=0.5, lambda=4 ==\n");
    {
        ExpScenario so{1.0, 1.0, 0.5, 0.5};
        const double ep = so.expected_power(4.0, 8'000'000);
        std::printf("h_eps = %.15g, E[gamma](lambda=4) = %.15g\n", so.h_eps(), ep);
        std::printf("predicted outage = cdf(2^{2 r0} sigma2 / lambda = 0.5) = %.15g\n", so.cdf(0.5));
        std::printf("capacity(lambda=4) = %.15g\n", so.capacity(4.0, 8'000'000));
    }

    std::printf("== equiprobable 2-bin split of exp(1), mass_cut=1e-6 ==\n");
    {
        const double mc = 1e-6;
        const double qa = -std::log1p(-(mc / 2.0));
        const double qm = -std::log(0.5);  // quantile at mc/2 + (1-mc)/2 = 0.5 exactly
        const double qb = -std::log(mc / 2.0);
        Fn xf = [](double x) { return x * std::exp(-x); };
        Fn f = [](double x) { return std::exp(-x); };
        const double m0 = midpoint_sum(xf, qa, qm, 4'000'000) / midpoint_sum(f, qa, qm, 4'000'000);
        const double m1 = midpoint_sum(xf, qm, qb, 8'000'000) / midpoint_sum(f, qm, qb, 8'000'000);
        std::printf("edges = %.15g %.15g %.15g\n", qa, qm, qb);
        std::printf("conditional means = %.15g %.15g\n", m0, m1);
    }

    std::printf("== Fig.2-style scenario: min law exp(rate 1.5), sigma2=1, r0=0.5, eps=0.01, p_av=10^0.9 ==\n");
    {
        ExpScenario fig{1.5, 1.0, 0.5, 0.01};
        const double pav = std::pow(10.0, 0.9);
        std::printf("h_eps = %.15g, p_min = %.15g\n", fig.h_eps(), fig.p_min(8'000'000));
        const double lam = fig.solve_lambda(pav);
        std::printf("lambda* = %.15g, capacity = %.15g\n", lam, fig.capacity(lam, 8'000'000));
    }
    return 0;
}
