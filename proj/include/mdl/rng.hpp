#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace mdl {

/// Stateless avalanche mix of (master, index) into a 64-bit seed.
///
/// Every Monte Carlo trial derives its own generator from this function, so
/// the stream seen by trial i is a pure function of (master, i) whatever the
/// worker count or execution order. Within one master the map index -> seed
/// is injective (odd multiplier, bijective finalizer).
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master ^ (index * 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Small counter-style PRNG (SplitMix64). One instance per trial.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0,1]; safe as a logarithm argument.
    double positive_uniform01() { return 1.0 - uniform01(); }

    /// Low n bits of one draw, n in [1,32].
    std::uint32_t bits(int n) {
        return static_cast<std::uint32_t>(next() & ((1ULL << n) - 1));
    }

    /// Circularly symmetric complex Gaussian, unit total variance
    /// (real and imaginary parts independent with variance 1/2 each).
    std::complex<double> cgauss() {
        const double r = std::sqrt(-std::log(positive_uniform01()));
        const double phi = 2.0 * std::numbers::pi * uniform01();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace mdl
