#ifndef EISIM_RNG_HPP
#define EISIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string_view>

namespace eisim {

// All randomness in a run is derived from one seed through keyed streams, so
// any quantity can be redrawn independently of evaluation order. The generator
// is hand-rolled (splitmix64 + Box-Muller) because std::normal_distribution is
// implementation-defined and would break the byte-identical-output contract
// across standard libraries.

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// FNV-1a, for turning string ids and stream tags into key material.
constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

// Folds a list of keys into a single well-mixed 64-bit value.
constexpr std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t state = 0x8f3ad1c2be6a97d5ull;
    for (std::uint64_t k : keys) {
        state ^= k;
        (void)splitmix64_next(state);
    }
    std::uint64_t s = state;
    return splitmix64_next(s);
}

class KeyedRng {
public:
    explicit KeyedRng(std::uint64_t seed) : state_(seed) {}
    KeyedRng(std::initializer_list<std::uint64_t> keys) : state_(mix_keys(keys)) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi] inclusive via multiply-high mapping.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const auto wide = static_cast<unsigned __int128>(next_u64()) * span;
        return lo + static_cast<std::int64_t>(wide >> 64);
    }

    // Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; consumes two uniforms per variate (no cached second value,
    // so draws stay independent of call interleaving).
    double normal(double mean, double stddev) {
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace eisim

#endif
