#pragma once

#include <cmath>
#include <cstdint>

namespace cvqkd {

/// Logical random streams of the simulation. Each stream is derived from the
/// master seed independently, so e.g. Alice's phase sequence is reproducible
/// no matter how much randomness the other streams consume.
enum class Stream : std::uint64_t {
    alice_phase = 1,
    bob_basis = 2,
    channel_noise = 3,
    disclosure = 4,
    ldpc_construction = 5,
    toeplitz_seed = 6,
    calibration = 7,
    generic = 8,
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// xoshiro256** with splitmix64 seeding and named, splittable substreams.
///
/// substream(master, stream, block) is a pure function of its arguments, so a
/// simulation partitioned into fixed-size blocks produces bit-identical output
/// regardless of how the blocks are scheduled across threads.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = detail::splitmix64(sm);
    }

    static Rng substream(std::uint64_t master_seed, Stream stream, std::uint64_t block = 0) {
        std::uint64_t sm = master_seed;
        std::uint64_t mix = detail::splitmix64(sm);
        mix ^= 0x6a09e667f3bcc908ULL * (static_cast<std::uint64_t>(stream) + 1);
        mix ^= 0xbb67ae8584caa73bULL * (block + 1);
        return Rng(mix);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform integer in [0, bound) without modulo bias (Lemire rejection).
    std::uint32_t uniform_u32(std::uint32_t bound) {
        for (;;) {
            const std::uint64_t r = next_u64() & 0xffffffffULL;
            const std::uint64_t m = r * bound;
            if ((m & 0xffffffffULL) >= (0x100000000ULL % bound)) {
                return static_cast<std::uint32_t>(m >> 32);
            }
        }
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Marsaglia polar; deterministic for a given state.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        have_spare_ = true;
        return u * factor;
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace cvqkd
