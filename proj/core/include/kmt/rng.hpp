// Deterministic seeding, uniform variates, and standard-normal cdf/quantile.
// Everything here is reproducible bit-for-bit for a fixed seed: the engine is
// std::mt19937_64 (fully specified by the standard) and all conversions from
// bits to doubles are explicit.
#pragma once

#include <cstdint>
#include <random>

namespace kmt {

// SplitMix64 finalizer (Steele/Lea/Flood); full-avalanche 64-bit mix.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Child-seed derivation: child = splitmix64(master + golden * (stream + 1)).
// Stated once here and used everywhere a parallel replication or substream
// needs its own seed, so (master, index) -> child is stable across versions.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

// Seeded uniform generator. uniform() returns doubles in the open interval
// (0,1): (bits>>11) yields 53 random bits, +0.5 keeps both endpoints out, so
// quantile transforms never see 0 or 1.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    double uniform() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

// Standard normal cdf via erfc (accurate in both tails).
double norm_cdf(double x);

// Standard normal density.
double norm_pdf(double x);

// Standard normal quantile, Wichura's AS241 (PPND16), ~1e-15 relative
// accuracy over p in (0,1). Throws std::domain_error outside (0,1).
double norm_quantile(double p);

}  // namespace kmt
