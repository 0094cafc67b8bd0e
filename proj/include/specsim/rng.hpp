#pragma once

// Counter-based random number generation (Philox4x32-10). Streams are keyed by
// (seed, domain) and addressed by (replicate, index), so replicates can be
// generated in any order, on any number of workers, with identical output.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace specsim {

namespace detail {

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace detail

// One block of Philox4x32 with 10 rounds. Reference constants from Salmon et al.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::uint64_t key) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::mulhilo32(0xD2511F53u, ctr[0], hi0, lo0);
        detail::mulhilo32(0xCD9E8D57u, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return ctr;
}

// Stream of standard normal pairs addressed by (replicate, index).
// `domain` separates independent uses of the same user seed (measure sampling,
// lattice sampling, test-function banks, ...).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t domain = 0)
        : key_(detail::splitmix64(seed ^ detail::splitmix64(domain))) {}

    // Two independent N(0,1) values, Box-Muller from one Philox block.
    std::pair<double, double> normal_pair(std::uint64_t replicate, std::uint64_t index) const {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(replicate),
            static_cast<std::uint32_t>(replicate >> 32),
            static_cast<std::uint32_t>(index),
            static_cast<std::uint32_t>(index >> 32),
        };
        const auto w = philox4x32(ctr, key_);
        const std::uint64_t a = (static_cast<std::uint64_t>(w[1]) << 32) | w[0];
        const std::uint64_t b = (static_cast<std::uint64_t>(w[3]) << 32) | w[2];
        // u1 in (0,1], u2 in [0,1)
        const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    double normal(std::uint64_t replicate, std::uint64_t index) const {
        return normal_pair(replicate, index).first;
    }

    // Uniform in [0,1).
    double uniform(std::uint64_t replicate, std::uint64_t index) const {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(replicate),
            static_cast<std::uint32_t>(replicate >> 32),
            static_cast<std::uint32_t>(index),
            static_cast<std::uint32_t>(index >> 32),
        };
        const auto w = philox4x32(ctr, key_);
        const std::uint64_t a = (static_cast<std::uint64_t>(w[1]) << 32) | w[0];
        return static_cast<double>(a >> 11) * 0x1.0p-53;
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

// Stream domains used across the project. Distinct domains give independent
// streams for the same user seed.
namespace rng_domain {
inline constexpr std::uint64_t measure = 0;
inline constexpr std::uint64_t lattice = 1;
inline constexpr std::uint64_t bank = 2;
} // namespace rng_domain

} // namespace specsim
