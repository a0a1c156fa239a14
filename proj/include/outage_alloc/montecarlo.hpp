#pragma once

// Block-fading simulation of a solved policy: per-block gains from
// counter-based streams, allocation over the min gain, aggregated outage /
// power / rate with standard errors. Output is a pure function of
// (seed, n_blocks) — chunking and worker count cannot change it.

#include <cstdint>
#include <vector>

#include "outage_alloc/fading.hpp"
#include "outage_alloc/policy.hpp"

namespace outage_alloc::mc {

struct SimConfig {
    long long n_blocks = 1'000'000;
    std::uint64_t seed = 12345;
    long long chunk = 65'536;  // blocks per work unit
    int workers = 0;           // 0 = hardware concurrency

    void validate() const {
        if (n_blocks < 1) throw InvalidParam("SimConfig: n_blocks must be >= 1");
        if (chunk < 1) throw InvalidParam("SimConfig: chunk must be >= 1");
        if (workers < 0) throw InvalidParam("SimConfig: workers must be >= 0");
    }
};

struct SimStats {
    double outage_rate;
    double mean_power;
    double mean_rate;
    double se_outage;
    double se_power;
    double se_rate;
    long long n_blocks;
};

// Per-block trace rows (debug only); called in block order.
struct TraceSink {
    virtual void row(long long block, double h_min, double power, double rate, bool outage) = 0;
    virtual ~TraceSink() = default;
};

SimStats simulate(const Policy& pol, const std::vector<fading::GainDistribution>& users,
                  const SimConfig& cfg, TraceSink* trace = nullptr);

// Minimum power versus user count for iid exponential(omega) users; purely
// analytic, no sampling.
std::vector<std::pair<int, double>> scaling_experiment(double omega, const SystemParams& params,
                                                       const std::vector<int>& n_list);

}  // namespace outage_alloc::mc
