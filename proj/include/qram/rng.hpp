#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace qram {

// Deterministic, platform-independent RNG used for every Monte Carlo path.
// splitmix64 seeds xoshiro256**; uniform doubles come from the top 53 bits,
// so identical seeds give bit-identical streams on any conforming compiler.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // number of Bernoulli(p) attempts until first success, inclusive
    std::uint64_t geometric_attempts(double p) {
        if (p <= 0.0 || p > 1.0) throw std::invalid_argument("geometric_attempts: p outside (0,1]");
        if (p == 1.0) return 1;
        double u = uniform();
        while (u <= 0.0) u = uniform();
        const double k = std::floor(std::log(u) / std::log1p(-p));
        return 1 + static_cast<std::uint64_t>(k);
    }

    // independent stream for trial block `index` under a shared base seed
    static Rng stream(std::uint64_t base_seed, std::uint64_t index) {
        std::uint64_t sm = base_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return Rng(splitmix64(sm));
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4]{};
};

}  // namespace qram
