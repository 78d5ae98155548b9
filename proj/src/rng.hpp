#pragma once

#include <cstdint>

namespace qgossip {

// All randomness in the project flows through SplitMix64 streams whose seeds
// are derived with the functions below. This is the single place that pins
// the generator and the mixing rule; golden traces depend on both.

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Steele, Lea & Flood, "Fast splittable pseudorandom
// number generators").
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += kGoldenGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream seed for sub-experiment `index` of a parent seed. Trial k of
// source s uses derive_seed(derive_seed(seed, s + 1), k); multi-piece runs
// use source slot 0. The derivation is a pure function of the indices, so
// trials may be executed in any order or in parallel.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index));
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += kGoldenGamma;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits, platform-independent.
    constexpr double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace qgossip
