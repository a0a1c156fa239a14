#include "outage_alloc/fading.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "outage_alloc/numerics.hpp"

namespace outage_alloc::fading {

namespace {

// Bisection quantile on the cdf; bracket found by doubling above the support.
double numeric_quantile(const RealFn& cdf, double support_lo, double p) {
    if (p <= 0.0) return support_lo;
    numerics::Tolerance tol;
    tol.rel = 1e-13;
    tol.abs = 1e-13;
    tol.max_iter = 200;
    const double hi = numerics::bracket_above([&](double x) { return cdf(x); }, support_lo, p);
    return numerics::bisect(cdf, support_lo, hi, p, tol);
}

}  // namespace

GainDistribution exponential_gain(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw InvalidParam("exponential_gain: omega must be positive and finite");
    const double rate = 1.0 / omega;
    GainDistribution d;
    d.pdf = [rate](double x) { return x < 0.0 ? 0.0 : rate * std::exp(-rate * x); };
    d.cdf = [rate](double x) { return x < 0.0 ? 0.0 : -std::expm1(-rate * x); };
    d.sf = [rate](double x) { return x < 0.0 ? 1.0 : std::exp(-rate * x); };
    d.quantile = [omega](double p) { return -omega * std::log1p(-p); };
    d.sample = [omega](rng::UniformStream& s) { return -omega * std::log1p(-s.next()); };
    d.mean_gain = omega;
    d.support_lo = 0.0;
    d.exp_rate = rate;
    return d;
}

GainDistribution tabulated_gain(const std::vector<double>& gains,
                                const std::vector<double>& cdf_values) {
    const std::size_t n = gains.size();
    if (n != cdf_values.size() || n < 2)
        throw InvalidParam("tabulated_gain: need >= 2 matching (gain, cdf) rows");
    if (gains.front() < 0.0) throw InvalidParam("tabulated_gain: gains must be >= 0");
    if (cdf_values.front() != 0.0) throw InvalidParam("tabulated_gain: first cdf must be 0");
    if (cdf_values.back() < 0.9999)
        throw InvalidParam("tabulated_gain: last cdf must be >= 0.9999");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(gains[i] > gains[i - 1]) || !(cdf_values[i] > cdf_values[i - 1]))
            throw InvalidParam("tabulated_gain: columns must be strictly increasing");
    }

    auto g = std::make_shared<std::vector<double>>(gains);
    auto c = std::make_shared<std::vector<double>>(cdf_values);
    const double norm = c->back();
    for (double& v : *c) v /= norm;  // continuous law, no tail atom

    const double lo = g->front();
    const double hi_gain = g->back();

    GainDistribution d;
    d.cdf = [g, c, lo, hi_gain](double x) {
        if (x <= lo) return 0.0;
        if (x >= hi_gain) return 1.0;
        const auto it = std::upper_bound(g->begin(), g->end(), x);
        const std::size_t i = static_cast<std::size_t>(it - g->begin());
        const double t = (x - (*g)[i - 1]) / ((*g)[i] - (*g)[i - 1]);
        return (*c)[i - 1] + t * ((*c)[i] - (*c)[i - 1]);
    };
    d.sf = [cdf = d.cdf](double x) { return 1.0 - cdf(x); };
    d.pdf = [g, c, lo, hi_gain](double x) {
        if (x < lo || x >= hi_gain) return 0.0;
        const auto it = std::upper_bound(g->begin(), g->end(), x);
        const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - g->begin()),
                                                    g->size() - 1);
        return ((*c)[i] - (*c)[i - 1]) / ((*g)[i] - (*g)[i - 1]);
    };
    d.quantile = [g, c, lo, hi_gain](double p) {
        if (p <= 0.0) return lo;
        if (p >= 1.0) return hi_gain;
        const auto it = std::lower_bound(c->begin(), c->end(), p);
        std::size_t i = static_cast<std::size_t>(it - c->begin());
        if (i == 0) i = 1;
        const double t = (p - (*c)[i - 1]) / ((*c)[i] - (*c)[i - 1]);
        return (*g)[i - 1] + t * ((*g)[i] - (*g)[i - 1]);
    };
    d.sample = [q = d.quantile](rng::UniformStream& s) { return q(s.next()); };
    d.support_lo = lo;
    d.exp_rate = 0.0;
    // mean of a piecewise-linear cdf: support_lo + integral of the survival
    double mean = lo;
    for (std::size_t i = 1; i < n; ++i)
        mean += (1.0 - 0.5 * ((*c)[i - 1] + (*c)[i])) * ((*g)[i] - (*g)[i - 1]);
    d.mean_gain = mean;
    return d;
}

GainDistribution load_tabulated_gain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParam("tabulated law: cannot open '" + path + "'");
    std::vector<double> gains, cdfs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream row(line);
        double gain = 0.0, cdf = 0.0;
        if (!(row >> gain >> cdf))
            throw InvalidParam("tabulated law: " + path + ":" + std::to_string(lineno) +
                               ": expected 'gain cdf'");
        gains.push_back(gain);
        cdfs.push_back(cdf);
    }
    try {
        return tabulated_gain(gains, cdfs);
    } catch (const InvalidParam& e) {
        throw InvalidParam(path + ": " + e.what());
    }
}

MinGainDistribution min_gain(std::vector<GainDistribution> parts) {
    if (parts.empty()) throw EmptyList("min_gain: no per-user laws given");

    MinGainDistribution d;
    d.parts = std::move(parts);
    auto parts_ptr = std::make_shared<std::vector<GainDistribution>>(d.parts);

    double support_lo = parts_ptr->front().support_lo;
    bool all_exp = true;
    double rate_sum = 0.0;
    for (const auto& p : *parts_ptr) {
        support_lo = std::min(support_lo, p.support_lo);
        if (p.exp_rate > 0.0)
            rate_sum += p.exp_rate;
        else
            all_exp = false;
    }

    if (all_exp) {
        // min of independent exponentials is exponential with summed rate
        static_cast<GainDistribution&>(d) = exponential_gain(1.0 / rate_sum);
    } else {
        d.sf = [parts_ptr](double x) {
            double s = 1.0;
            for (const auto& p : *parts_ptr) s *= p.sf(x);
            return s;
        };
        d.cdf = [sf = d.sf](double x) { return 1.0 - sf(x); };
        d.pdf = [parts_ptr](double x) {
            double total = 0.0;
            for (std::size_t i = 0; i < parts_ptr->size(); ++i) {
                double term = (*parts_ptr)[i].pdf(x);
                for (std::size_t j = 0; j < parts_ptr->size(); ++j)
                    if (j != i) term *= (*parts_ptr)[j].sf(x);
                total += term;
            }
            return total;
        };
        d.quantile = [cdf = d.cdf, support_lo](double p) {
            return numeric_quantile(cdf, support_lo, p);
        };
        d.mean_gain = std::numeric_limits<double>::quiet_NaN();
        d.exp_rate = 0.0;
        d.support_lo = support_lo;
    }

    // draw every part, return the minimum (regardless of closed forms above)
    d.sample = [parts_ptr](rng::UniformStream& s) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& p : *parts_ptr) m = std::min(m, p.sample(s));
        return m;
    };
    return d;
}

double quantile_of_min(const MinGainDistribution& d, double eps) {
    if (!(eps >= 0.0) || eps >= 1.0) throw InvalidParam("quantile_of_min: need 0 <= eps < 1");
    if (eps == 0.0) return d.support_lo;
    return d.quantile(eps);
}

}  // namespace outage_alloc::fading
