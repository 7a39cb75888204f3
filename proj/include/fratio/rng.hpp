#pragma once

// Seeded, splittable random stream built on xoshiro256++ with splitmix64
// initialization. Identical (seed, stream_id) pairs reproduce identical
// draw sequences on every platform; distinct stream_ids give streams that
// are independent for Monte Carlo purposes, so sweeps can fan out one
// stream per row.

#include <array>
#include <cmath>
#include <cstdint>

namespace fratio {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}

} // namespace detail

class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        std::uint64_t mix = seed ^ (stream_id * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL);
        for (auto& word : state_) word = detail::splitmix64(mix);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Deterministically derived independent stream (for per-row fan-out).
    RandomStream substream(std::uint64_t k) const {
        return RandomStream(seed_, stream_id_ * 0x9e3779b97f4a7c15ULL + k + 1);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1); never returns an exact zero.
    double uniform_pos() {
        double u;
        do { u = uniform(); } while (u == 0.0);
        return u;
    }

    // Standard normal via the Marsaglia polar method. The spare deviate is
    // discarded so the draw count per call is stable.
    double gauss() {
        for (;;) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double q = u * u + v * v;
            if (q > 0.0 && q < 1.0) return u * std::sqrt(-2.0 * std::log(q) / q);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> state_;
};

} // namespace fratio
