// Deterministic random source. The mappings from raw engine output to ints,
// unit doubles and Gumbel noise are written out by hand so that simulated
// datasets are reproducible byte for byte regardless of standard-library
// distribution implementations.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace revpref {

// splitmix64; used to derive independent per-agent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, n) by rejection.
    std::uint32_t uniform_int(std::uint32_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return static_cast<std::uint32_t>(x % n);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard Gumbel scaled by `scale`, from the inverse CDF. The argument
    // of the inner log is in (0, 1], so the result is finite.
    double gumbel(double scale) {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return -scale * std::log(-std::log(u));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace revpref
