#pragma once

#include <cmath>
#include <cstdint>

#include "randsum/math_utils.hpp"

namespace randsum {

namespace detail {

/// Stafford's "mix13" variant of the murmur finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

/// Derive an odd, well-mixed stream increment from a key.
inline std::uint64_t mix_gamma(std::uint64_t z) {
    z = mix64(z) | 1ULL;
    const int bits = __builtin_popcountll(z ^ (z >> 1));
    if (bits < 24) z ^= 0xaaaaaaaaaaaaaaaaULL;
    return z;
}

}  // namespace detail

/// Splittable counter-style random stream (SplittableRandom design: a
/// Weyl sequence with a per-stream increment, finalized by mix64). Each
/// (seed, id...) tuple yields an independent stream, so replicate-level
/// parallelism cannot change results.
class RandomStream {
public:
    RandomStream() : RandomStream(0x9e3779b97f4a7c15ULL, 0) {}

    RandomStream(std::uint64_t state, std::uint64_t stream_key)
        : state_(detail::mix64(state ^ 0x6a09e667f3bcc909ULL)),
          gamma_(detail::mix_gamma(stream_key ^ 0xbb67ae8584caa73bULL)) {}

    std::uint64_t next_u64() {
        state_ += gamma_;
        return detail::mix64(state_);
    }

    /// Uniform draw in the open interval (0, 1); never returns an endpoint,
    /// so quantile transforms stay finite.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double standard_normal() { return norm_quantile(uniform01()); }

    double exponential(double rate) { return -std::log(uniform01()) / rate; }

private:
    std::uint64_t state_;
    std::uint64_t gamma_;
};

/// Build the substream for a (seed, id0, id1, ...) tuple; ids are folded
/// into both the starting state and the stream increment.
template <typename... Ids>
RandomStream substream(std::uint64_t seed, Ids... ids) {
    std::uint64_t key = detail::mix64(seed + 0x9e3779b97f4a7c15ULL);
    std::uint64_t acc = seed;
    ((key = detail::mix64(key ^ (static_cast<std::uint64_t>(ids) + 0x9e3779b97f4a7c15ULL)),
      acc = acc * 0x100000001b3ULL + static_cast<std::uint64_t>(ids)),
     ...);
    return RandomStream(key ^ acc, detail::mix64(key + acc));
}

/// Gamma(shape, 1) draw via Marsaglia-Tsang squeeze; shape < 1 handled by
/// the usual power boost.
inline double gamma_sample(RandomStream& rng, double shape) {
    if (shape < 1.0) {
        const double x = gamma_sample(rng, shape + 1.0);
        return x * std::pow(rng.uniform01(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        double z, v;
        do {
            z = rng.standard_normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
    }
}

namespace detail {

inline std::int64_t poisson_small(RandomStream& rng, double lambda) {
    const double limit = std::exp(-lambda);
    std::int64_t k = 0;
    double prod = rng.uniform01();
    while (prod > limit) {
        ++k;
        prod *= rng.uniform01();
    }
    return k;
}

/// Hoermann's PTRS transformed-rejection Poisson sampler (lambda >= 10).
inline std::int64_t poisson_ptrs(RandomStream& rng, double lambda) {
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform01() - 0.5;
        const double v = rng.uniform01();
        const double us = 0.5 - std::fabs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(kd);
        if (kd < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kd * loglam - lambda - std::lgamma(kd + 1.0))
            return static_cast<std::int64_t>(kd);
    }
}

}  // namespace detail

inline std::int64_t poisson_sample(RandomStream& rng, double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda < 10.0) return detail::poisson_small(rng, lambda);
    return detail::poisson_ptrs(rng, lambda);
}

}  // namespace randsum
