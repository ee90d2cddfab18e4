#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <variant>

#include "randsum/math_utils.hpp"
#include "randsum/rng.hpp"

namespace randsum {

// Summand catalog. All four families have finite positive variance, finite
// third absolute moments, and closed forms for the characteristic function
// and the truncated central second moment, so the coherency and Lindeberg
// quantities admit exact (non-Monte-Carlo) evaluation.

struct Normal {
    double mu;
    double sigma;
    Normal(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
        if (!(sigma > 0.0)) throw std::invalid_argument("Normal: sigma must be > 0");
    }
};

struct Uniform {
    double lo;
    double hi;
    Uniform(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo < hi)) throw std::invalid_argument("Uniform: requires lo < hi");
    }
};

struct TwoPoint {
    double x1;
    double x2;
    double p;  // P(X = x1)
    TwoPoint(double x1_, double x2_, double p_) : x1(x1_), x2(x2_), p(p_) {
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("TwoPoint: p must be in (0,1)");
        if (x1 == x2) throw std::invalid_argument("TwoPoint: atoms must differ");
    }
};

struct ShiftedExponential {
    double rate;
    double shift;
    ShiftedExponential(double rate_, double shift_) : rate(rate_), shift(shift_) {
        if (!(rate > 0.0)) throw std::invalid_argument("ShiftedExponential: rate must be > 0");
    }
};

using SummandFamily = std::variant<Normal, Uniform, TwoPoint, ShiftedExponential>;

inline double mean(const SummandFamily& fam) {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Normal>) return f.mu;
            if constexpr (std::is_same_v<T, Uniform>) return 0.5 * (f.lo + f.hi);
            if constexpr (std::is_same_v<T, TwoPoint>) return f.p * f.x1 + (1.0 - f.p) * f.x2;
            if constexpr (std::is_same_v<T, ShiftedExponential>) return f.shift + 1.0 / f.rate;
        },
        fam);
}

inline double variance(const SummandFamily& fam) {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Normal>) return f.sigma * f.sigma;
            if constexpr (std::is_same_v<T, Uniform>) {
                const double w = f.hi - f.lo;
                return w * w / 12.0;
            }
            if constexpr (std::is_same_v<T, TwoPoint>) {
                const double d = f.x1 - f.x2;
                return f.p * (1.0 - f.p) * d * d;
            }
            if constexpr (std::is_same_v<T, ShiftedExponential>) return 1.0 / (f.rate * f.rate);
        },
        fam);
}

namespace detail {

inline double sinc(double x) {
    if (std::fabs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

}  // namespace detail

/// Characteristic function E exp(itX), exact closed form per family.
inline std::complex<double> cf(const SummandFamily& fam, double t) {
    using C = std::complex<double>;
    return std::visit(
        [t](const auto& f) -> C {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Normal>) {
                const double mag = std::exp(-0.5 * f.sigma * f.sigma * t * t);
                return C(mag * std::cos(f.mu * t), mag * std::sin(f.mu * t));
            }
            if constexpr (std::is_same_v<T, Uniform>) {
                const double c = 0.5 * (f.lo + f.hi);
                const double s = detail::sinc(0.5 * t * (f.hi - f.lo));
                return C(s * std::cos(c * t), s * std::sin(c * t));
            }
            if constexpr (std::is_same_v<T, TwoPoint>) {
                return f.p * C(std::cos(t * f.x1), std::sin(t * f.x1)) +
                       (1.0 - f.p) * C(std::cos(t * f.x2), std::sin(t * f.x2));
            }
            if constexpr (std::is_same_v<T, ShiftedExponential>) {
                // rate/(rate - it), shifted
                const C base = f.rate / C(f.rate, -t);
                return base * C(std::cos(t * f.shift), std::sin(t * f.shift));
            }
        },
        fam);
}

/// Truncated central second moment: integral of (x - mean)^2 over |x - mean| > c.
/// Nonincreasing in c, equals the variance at c = 0, tends to 0 as c grows.
inline double truncated_second_moment(const SummandFamily& fam, double c) {
    if (c < 0.0) throw std::domain_error("truncated_second_moment: c must be >= 0");
    return std::visit(
        [c](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Normal>) {
                const double z = c / f.sigma;
                return 2.0 * f.sigma * f.sigma * (z * norm_pdf(z) + norm_cdf_c(z));
            }
            if constexpr (std::is_same_v<T, Uniform>) {
                const double h = 0.5 * (f.hi - f.lo);
                if (c >= h) return 0.0;
                return (h * h * h - c * c * c) / (3.0 * h);
            }
            if constexpr (std::is_same_v<T, TwoPoint>) {
                const double q = 1.0 - f.p;
                const double d1 = q * (f.x1 - f.x2);   // x1 - mean
                const double d2 = f.p * (f.x2 - f.x1);  // x2 - mean
                double v = 0.0;
                if (std::fabs(d1) > c) v += f.p * d1 * d1;
                if (std::fabs(d2) > c) v += q * d2 * d2;
                return v;
            }
            if constexpr (std::is_same_v<T, ShiftedExponential>) {
                // centered law: density rate*exp(-rate*d - 1) on [-1/rate, inf)
                const double x = f.rate * c;
                const double inv2 = 1.0 / (f.rate * f.rate);
                double v = inv2 * std::exp(-1.0 - x) * (x * x + 2.0 * x + 2.0);
                if (x < 1.0) v += inv2 * (1.0 - std::exp(x - 1.0) * (x * x - 2.0 * x + 2.0));
                return v;
            }
        },
        fam);
}

/// E|X - mean|^3, exact closed form per family.
inline double third_abs_central_moment(const SummandFamily& fam) {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Normal>) {
                return 2.0 * std::sqrt(2.0 / kPi) * f.sigma * f.sigma * f.sigma;
            }
            if constexpr (std::is_same_v<T, Uniform>) {
                const double h = 0.5 * (f.hi - f.lo);
                return h * h * h / 4.0;
            }
            if constexpr (std::is_same_v<T, TwoPoint>) {
                const double q = 1.0 - f.p;
                const double ad = std::fabs(f.x1 - f.x2);
                return f.p * q * (f.p * f.p + q * q) * ad * ad * ad;
            }
            if constexpr (std::is_same_v<T, ShiftedExponential>) {
                return (12.0 / std::exp(1.0) - 2.0) / (f.rate * f.rate * f.rate);
            }
        },
        fam);
}

/// One draw by quantile transform (TwoPoint: direct atom choice); a fixed
/// stream reproduces the same sequence.
inline double sample(const SummandFamily& fam, RandomStream& rng) {
    return std::visit(
        [&rng](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Normal>) {
                return f.mu + f.sigma * rng.standard_normal();
            }
            if constexpr (std::is_same_v<T, Uniform>) {
                return f.lo + (f.hi - f.lo) * rng.uniform01();
            }
            if constexpr (std::is_same_v<T, TwoPoint>) {
                return rng.uniform01() < f.p ? f.x1 : f.x2;
            }
            if constexpr (std::is_same_v<T, ShiftedExponential>) {
                return f.shift - std::log1p(-rng.uniform01()) / f.rate;
            }
        },
        fam);
}

}  // namespace randsum
