#include "outage_alloc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "outage_alloc/rng.hpp"

namespace outage_alloc::mc {

namespace {

struct BlockValues {
    std::vector<double> h_min;
    std::vector<double> power;
    std::vector<double> rate;
    std::vector<std::uint8_t> outage;
};

void run_span(const Policy& pol, const std::vector<fading::GainDistribution>& users,
              std::uint64_t seed, long long first, long long count, BlockValues& out) {
    out.h_min.resize(static_cast<std::size_t>(count));
    out.power.resize(static_cast<std::size_t>(count));
    out.rate.resize(static_cast<std::size_t>(count));
    out.outage.resize(static_cast<std::size_t>(count));
    const double r0 = pol.params.r0;
    for (long long k = 0; k < count; ++k) {
        rng::BlockStream stream(seed, static_cast<std::uint64_t>(first + k));
        double h_min = std::numeric_limits<double>::infinity();
        for (const auto& u : users) h_min = std::min(h_min, u.sample(stream));
        const double p = allocate(pol, h_min);
        const double r = rate_bits(h_min * p, pol.params.sigma2);
        out.h_min[static_cast<std::size_t>(k)] = h_min;
        out.power[static_cast<std::size_t>(k)] = p;
        out.rate[static_cast<std::size_t>(k)] = r;
        // slack keeps blocks sitting exactly on the service boundary in service
        out.outage[static_cast<std::size_t>(k)] = r < r0 - 1e-12 ? 1 : 0;
    }
}

}  // namespace

SimStats simulate(const Policy& pol, const std::vector<fading::GainDistribution>& users,
                  const SimConfig& cfg, TraceSink* trace) {
    cfg.validate();
    if (users.empty()) throw EmptyList("simulate: no users");

    const long long n = cfg.n_blocks;
    const long long chunk = std::min(cfg.chunk, n);
    const long long n_chunks = (n + chunk - 1) / chunk;
    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp<int>(workers, 1, 16);
    workers = static_cast<int>(std::min<long long>(workers, n_chunks));

    double sum_p = 0.0, sumsq_p = 0.0, sum_r = 0.0, sumsq_r = 0.0;
    long long outage_count = 0;

    // Waves of `workers` chunks run concurrently; accumulation happens
    // afterwards in block order, so sums are grouping-invariant.
    std::vector<BlockValues> wave(static_cast<std::size_t>(workers));
    for (long long wave_start = 0; wave_start < n_chunks; wave_start += workers) {
        const int in_wave = static_cast<int>(std::min<long long>(workers, n_chunks - wave_start));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(in_wave));
        for (int w = 0; w < in_wave; ++w) {
            const long long first = (wave_start + w) * chunk;
            const long long count = std::min(chunk, n - first);
            pool.emplace_back(run_span, std::cref(pol), std::cref(users), cfg.seed, first,
                              count, std::ref(wave[static_cast<std::size_t>(w)]));
        }
        for (auto& t : pool) t.join();

        for (int w = 0; w < in_wave; ++w) {
            const BlockValues& v = wave[static_cast<std::size_t>(w)];
            const long long first = (wave_start + w) * chunk;
            for (std::size_t k = 0; k < v.power.size(); ++k) {
                sum_p += v.power[k];
                sumsq_p += v.power[k] * v.power[k];
                sum_r += v.rate[k];
                sumsq_r += v.rate[k] * v.rate[k];
                outage_count += v.outage[k];
                if (trace)
                    trace->row(first + static_cast<long long>(k), v.h_min[k], v.power[k],
                               v.rate[k], v.outage[k] != 0);
            }
        }
    }

    const double dn = static_cast<double>(n);
    const auto stderr_of = [dn](double sum, double sumsq) {
        if (dn < 2.0) return 0.0;
        const double var = std::max(0.0, (sumsq - sum * sum / dn) / (dn - 1.0));
        return std::sqrt(var / dn);
    };

    SimStats s;
    s.n_blocks = n;
    s.mean_power = sum_p / dn;
    s.mean_rate = sum_r / dn;
    s.outage_rate = static_cast<double>(outage_count) / dn;
    s.se_power = stderr_of(sum_p, sumsq_p);
    s.se_rate = stderr_of(sum_r, sumsq_r);
    s.se_outage = stderr_of(static_cast<double>(outage_count),
                            static_cast<double>(outage_count));  // indicator: x^2 = x
    return s;
}

std::vector<std::pair<int, double>> scaling_experiment(double omega, const SystemParams& params,
                                                       const std::vector<int>& n_list) {
    if (n_list.empty()) throw EmptyList("scaling_experiment: empty n_list");
    std::vector<std::pair<int, double>> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        if (n < 1) throw InvalidParam("scaling_experiment: user counts must be >= 1");
        std::vector<fading::GainDistribution> users(static_cast<std::size_t>(n));
        for (auto& u : users) u = fading::exponential_gain(omega);
        const auto d = fading::min_gain(std::move(users));
        out.emplace_back(n, min_power(d, params));
    }
    return out;
}

}  // namespace outage_alloc::mc
