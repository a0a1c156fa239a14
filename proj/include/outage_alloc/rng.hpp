#pragma once

// Counter-based uniform streams (Philox-4x32-10). A stream is a pure
// function of (seed, block index, draw index), so block-level work can be
// scheduled in any order without changing the drawn values.
// Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.

#include <array>
#include <cstdint>

namespace outage_alloc::rng {

// Source of uniforms on (0, 1); samplers pull from it one draw at a time.
struct UniformStream {
    virtual double next() = 0;
    virtual ~UniformStream() = default;
};

namespace detail {

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mul_hi_lo(kM0, ctr[0], hi0, lo0);
        mul_hi_lo(kM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1p-53;  // strictly inside (0, 1)
}

}  // namespace detail

// Uniform stream for one (seed, block) pair; each call advances the draw counter.
class BlockStream final : public UniformStream {
public:
    BlockStream(std::uint64_t seed, std::uint64_t block) : seed_(seed), block_(block) {}

    double next() override {
        if (pending_) {
            pending_ = false;
            return buffered_;
        }
        const auto out = detail::philox4x32(
            {static_cast<std::uint32_t>(draw_), static_cast<std::uint32_t>(draw_ >> 32),
             static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        ++draw_;
        buffered_ = detail::to_unit(out[2], out[3]);
        pending_ = true;
        return detail::to_unit(out[0], out[1]);
    }

private:
    std::uint64_t seed_;
    std::uint64_t block_;
    std::uint64_t draw_ = 0;
    double buffered_ = 0.0;
    bool pending_ = false;
};

}  // namespace outage_alloc::rng
