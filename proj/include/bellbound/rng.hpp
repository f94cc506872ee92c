#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace bellbound {

// Seed used whenever the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 424242;

// Counter-based splittable PRNG. Each draw finalizes key + counter*gamma with
// the SplitMix64 mixer, so a stream is a pure function of (seed, fork path,
// draw index) and is identical across platforms and runs.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ kGamma)) {}

    // Derives an independent child stream; children with distinct ids never
    // collide with the parent or with each other in practice.
    Rng fork(std::uint64_t stream_id) const {
        return Rng(mix(key_ ^ mix(stream_id + kGamma)), 0);
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

    // Uniform in (0, 1].
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the partner draw is cached.
    double next_gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r  = std::sqrt(-2.0 * std::log(u1));
        const double a  = 2.0 * kPi * u2;
        cached_     = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    // Complex standard normal: E|z|^2 = 1.
    std::complex<double> next_complex_gaussian() {
        const double re = next_gaussian();
        const double im = next_gaussian();
        return {re * kInvSqrt2, im * kInvSqrt2};
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  private:
    Rng(std::uint64_t key, int) : key_(key) {}

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
    static constexpr double kPi           = 3.14159265358979323846;
    static constexpr double kInvSqrt2     = 0.70710678118654752440;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_     = 0;
    std::uint64_t counter_ = 0;
    double cached_         = 0.0;
    bool has_cached_       = false;
};

} // namespace bellbound
