#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "randsum/math_utils.hpp"
#include "randsum/quadrature.hpp"
#include "randsum/rng.hpp"

namespace randsum {

/// Thrown when an exact computation would need more index atoms than the
/// configured cap; callers may fall back to Monte Carlo.
class TruncationCapError : public std::runtime_error {
public:
    explicit TruncationCapError(const std::string& what) : std::runtime_error(what) {}
};

// Random index N with positive integer support (sums start at the first
// summand, so laws with mass at zero are excluded by construction).

struct Deterministic {
    std::int64_t k;
    explicit Deterministic(std::int64_t k_) : k(k_) {
        if (k < 1) throw std::invalid_argument("Deterministic: k must be >= 1");
    }
};

struct Geometric {
    double p;  // support {1,2,...}, pmf p(1-p)^{k-1}
    explicit Geometric(double p_) : p(p_) {
        if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("Geometric: p must be in (0,1]");
    }
};

/// Poisson with gamma-mixed intensity (shape r, intensity mean m),
/// conditioned on N >= 1. Marginally a zero-truncated negative binomial.
struct MixedPoissonGamma {
    double r;
    double m;
    MixedPoissonGamma(double r_, double m_) : r(r_), m(m_) {
        if (!(r > 0.0)) throw std::invalid_argument("MixedPoissonGamma: shape must be > 0");
        if (!(m > 0.0)) throw std::invalid_argument("MixedPoissonGamma: mean must be > 0");
    }
    double success_prob() const { return r / (m + r); }           // NB p
    double zero_mass() const { return std::pow(success_prob(), r); }  // untruncated P(N=0)
};

using IndexLaw = std::variant<Deterministic, Geometric, MixedPoissonGamma>;

inline double pmf(const IndexLaw& law, std::int64_t k) {
    if (k < 1) throw std::domain_error("pmf: k must be >= 1");
    return std::visit(
        [k](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Deterministic>) return k == l.k ? 1.0 : 0.0;
            if constexpr (std::is_same_v<T, Geometric>)
                return l.p * std::pow(1.0 - l.p, static_cast<double>(k - 1));
            if constexpr (std::is_same_v<T, MixedPoissonGamma>) {
                const double p = l.success_prob();
                const double q = 1.0 - p;
                const double lognb = std::lgamma(k + l.r) - std::lgamma(k + 1.0) -
                                     std::lgamma(l.r) + l.r * std::log(p) + k * std::log(q);
                return std::exp(lognb) / (1.0 - l.zero_mass());
            }
        },
        law);
}

inline double mean_index(const IndexLaw& law) {
    return std::visit(
        [](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Deterministic>) return static_cast<double>(l.k);
            if constexpr (std::is_same_v<T, Geometric>) return 1.0 / l.p;
            if constexpr (std::is_same_v<T, MixedPoissonGamma>)
                return l.m / (1.0 - l.zero_mass());
        },
        law);
}

/// Probability generating function psi(s) = E s^N on [0, 1].
inline double psi(const IndexLaw& law, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("psi: s must be in [0,1]");
    return std::visit(
        [s](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Deterministic>)
                return std::pow(s, static_cast<double>(l.k));
            if constexpr (std::is_same_v<T, Geometric>)
                return l.p * s / (1.0 - (1.0 - l.p) * s);
            if constexpr (std::is_same_v<T, MixedPoissonGamma>) {
                const double p = l.success_prob();
                const double q = 1.0 - p;
                const double p0 = l.zero_mass();
                const double full = std::pow(p / (1.0 - q * s), l.r);
                return (full - p0) / (1.0 - p0);
            }
        },
        law);
}

/// Integral of psi(s)/s over [0, 1] (equals E[1/N]); adaptive quadrature,
/// finite at 0 because the support starts at 1.
inline double psi_integral(const IndexLaw& law) {
    const double p1 = pmf(law, 1);
    auto integrand = [&](double s) { return s > 1e-14 ? psi(law, s) / s : p1; };
    return adaptive_simpson(integrand, 0.0, 1.0, 1e-13);
}

/// Finite renormalized support {k_min, ..., k_min + weights.size() - 1}.
struct TruncatedIndex {
    std::int64_t k_min = 1;
    std::vector<double> weights;   // renormalized to sum 1
    double tail_mass = 0.0;        // mass dropped before renormalization
    std::int64_t k_max() const {
        return k_min + static_cast<std::int64_t>(weights.size()) - 1;
    }
};

/// Smallest support prefix with tail mass <= tail_eps, renormalized.
inline TruncatedIndex truncate(const IndexLaw& law, double tail_eps = 1e-12,
                               std::int64_t cap = 10000000) {
    if (!(tail_eps > 0.0 && tail_eps <= 1e-6))
        throw std::invalid_argument("truncate: tail_eps must be in (0, 1e-6]");
    TruncatedIndex out;
    if (const auto* det = std::get_if<Deterministic>(&law)) {
        out.k_min = det->k;
        out.weights = {1.0};
        return out;
    }
    std::int64_t K;
    if (const auto* geo = std::get_if<Geometric>(&law)) {
        if (geo->p == 1.0) {
            out.weights = {1.0};
            return out;
        }
        // geometric tail beyond K is (1-p)^K
        K = static_cast<std::int64_t>(std::ceil(std::log(tail_eps) / std::log1p(-geo->p)));
        K = std::max<std::int64_t>(K, 1);
        if (K > cap)
            throw TruncationCapError("truncate: geometric support needs " + std::to_string(K) +
                                     " atoms, cap is " + std::to_string(cap));
        out.weights.resize(static_cast<std::size_t>(K));
        for (std::int64_t k = 1; k <= K; ++k)
            out.weights[static_cast<std::size_t>(k - 1)] = pmf(law, k);
        out.tail_mass = std::pow(1.0 - geo->p, static_cast<double>(K));
    } else {
        const auto& mpg = std::get<MixedPoissonGamma>(law);
        const double p = mpg.success_prob();
        const double q = 1.0 - p;
        const double p0 = mpg.zero_mass();
        double nb = p0 * q * mpg.r;  // untruncated NB pmf at k=1
        double cum = 0.0;
        const double target = (1.0 - tail_eps) * (1.0 - p0);
        std::int64_t k = 1;
        for (;;) {
            out.weights.push_back(nb / (1.0 - p0));
            cum += nb;
            if (cum >= target) break;
            if (k >= cap)
                throw TruncationCapError("truncate: mixed Poisson support exceeds cap " +
                                         std::to_string(cap));
            nb *= q * (k + mpg.r) / (k + 1.0);
            ++k;
        }
        out.tail_mass = 1.0 - cum / (1.0 - p0);
    }
    KahanSum total;
    for (double w : out.weights) total.add(w);
    const double norm = total.value();
    for (double& w : out.weights) w /= norm;
    return out;
}

inline std::int64_t sample(const IndexLaw& law, RandomStream& rng) {
    return std::visit(
        [&rng](const auto& l) -> std::int64_t {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Deterministic>) return l.k;
            if constexpr (std::is_same_v<T, Geometric>) {
                if (l.p == 1.0) return 1;
                const double u = rng.uniform01();
                return 1 + static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-l.p)));
            }
            if constexpr (std::is_same_v<T, MixedPoissonGamma>) {
                // reject whole (intensity, count) pairs at zero to realize
                // the N >= 1 conditioning exactly
                for (;;) {
                    const double lambda = gamma_sample(rng, l.r) * (l.m / l.r);
                    const std::int64_t n = poisson_sample(rng, lambda);
                    if (n >= 1) return n;
                }
            }
        },
        law);
}

}  // namespace randsum
