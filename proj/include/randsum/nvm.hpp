#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "randsum/math_utils.hpp"
#include "randsum/metrics.hpp"
#include "randsum/quadrature.hpp"
#include "randsum/rng.hpp"

namespace randsum {

// Mixing laws for the variance variable W >= 0. Exponential mixing yields
// the asymmetric Laplace limit, gamma the variance gamma, inverse gamma the
// skew Student, inverse Gaussian the normal\inverse Gaussian family.

struct DiracMix {
    double w;
    explicit DiracMix(double w_) : w(w_) {
        if (w < 0.0) throw std::invalid_argument("DiracMix: w must be >= 0");
    }
};

struct ExponentialMix {
    double rate;
    explicit ExponentialMix(double r) : rate(r) {
        if (!(r > 0.0)) throw std::invalid_argument("ExponentialMix: rate must be > 0");
    }
};

struct GammaMix {
    double shape;
    double rate;
    GammaMix(double s, double r) : shape(s), rate(r) {
        if (!(s > 0.0 && r > 0.0)) throw std::invalid_argument("GammaMix: parameters must be > 0");
    }
};

struct InverseGammaMix {
    double shape;
    double scale;
    InverseGammaMix(double sh, double sc) : shape(sh), scale(sc) {
        if (!(sh > 0.0 && sc > 0.0))
            throw std::invalid_argument("InverseGammaMix: parameters must be > 0");
    }
};

struct InverseGaussianMix {
    double mean;
    double shape;
    InverseGaussianMix(double m, double s) : mean(m), shape(s) {
        if (!(m > 0.0 && s > 0.0))
            throw std::invalid_argument("InverseGaussianMix: parameters must be > 0");
    }
};

using MixingLaw =
    std::variant<DiracMix, ExponentialMix, GammaMix, InverseGammaMix, InverseGaussianMix>;

inline double mixing_cdf(const MixingLaw& law, double w) {
    return std::visit(
        [w](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, DiracMix>) return w > l.w ? 1.0 : 0.0;
            if constexpr (std::is_same_v<T, ExponentialMix>)
                return w <= 0.0 ? 0.0 : -std::expm1(-l.rate * w);
            if constexpr (std::is_same_v<T, GammaMix>)
                return w <= 0.0 ? 0.0 : gamma_p(l.shape, l.rate * w);
            if constexpr (std::is_same_v<T, InverseGammaMix>)
                return w <= 0.0 ? 0.0 : gamma_q(l.shape, l.scale / w);
            if constexpr (std::is_same_v<T, InverseGaussianMix>) {
                if (w <= 0.0) return 0.0;
                const double s = std::sqrt(l.shape / w);
                return norm_cdf(s * (w / l.mean - 1.0)) +
                       std::exp(2.0 * l.shape / l.mean +
                                std::log(norm_cdf(-s * (w / l.mean + 1.0))));
            }
        },
        law);
}

inline double mixing_quantile(const MixingLaw& law, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("mixing_quantile: u outside [0,1]");
    return std::visit(
        [u](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, DiracMix>) return l.w;
            if constexpr (std::is_same_v<T, ExponentialMix>) return -std::log1p(-u) / l.rate;
            if constexpr (std::is_same_v<T, GammaMix>) return gamma_quantile(l.shape, u) / l.rate;
            if constexpr (std::is_same_v<T, InverseGammaMix>) {
                if (u == 0.0) return 0.0;
                return l.scale / gamma_quantile(l.shape, 1.0 - u);
            }
            if constexpr (std::is_same_v<T, InverseGaussianMix>) {
                if (u <= 0.0) return 0.0;
                if (u >= 1.0) return std::numeric_limits<double>::infinity();
                // monotone bisection in log-space
                double lo = std::log(l.mean) - 80.0, hi = std::log(l.mean) + 80.0;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double s = std::sqrt(l.shape / std::exp(mid));
                    const double c =
                        norm_cdf(s * (std::exp(mid) / l.mean - 1.0)) +
                        std::exp(2.0 * l.shape / l.mean +
                                 std::log(norm_cdf(-s * (std::exp(mid) / l.mean + 1.0))));
                    (c < u ? lo : hi) = mid;
                    if (hi - lo < 1e-15) break;
                }
                return std::exp(0.5 * (lo + hi));
            }
        },
        law);
}

inline double mixing_mean(const MixingLaw& law) {
    return std::visit(
        [](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, DiracMix>) return l.w;
            if constexpr (std::is_same_v<T, ExponentialMix>) return 1.0 / l.rate;
            if constexpr (std::is_same_v<T, GammaMix>) return l.shape / l.rate;
            if constexpr (std::is_same_v<T, InverseGammaMix>) {
                if (l.shape <= 1.0) return std::numeric_limits<double>::infinity();
                return l.scale / (l.shape - 1.0);
            }
            if constexpr (std::is_same_v<T, InverseGaussianMix>) return l.mean;
        },
        law);
}

inline double mixing_sample(const MixingLaw& law, RandomStream& rng) {
    return std::visit(
        [&rng](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, DiracMix>) return l.w;
            if constexpr (std::is_same_v<T, ExponentialMix>) return rng.exponential(l.rate);
            if constexpr (std::is_same_v<T, GammaMix>) return gamma_sample(rng, l.shape) / l.rate;
            if constexpr (std::is_same_v<T, InverseGammaMix>)
                return l.scale / gamma_sample(rng, l.shape);
            if constexpr (std::is_same_v<T, InverseGaussianMix>) {
                // Michael-Schucany-Haas transform
                const double z = rng.standard_normal();
                const double v = z * z;
                const double mu = l.mean, lam = l.shape;
                const double x = mu + mu * mu * v / (2.0 * lam) -
                                 mu / (2.0 * lam) *
                                     std::sqrt(4.0 * mu * lam * v + mu * mu * v * v);
                return rng.uniform01() <= mu / (mu + x) ? x : mu * mu / x;
            }
        },
        law);
}

/// Normal variance-mean mixture Z = beta + alpha*W + sqrt(W)*G, G standard
/// normal, W >= 0 with the given mixing law. CDF/PDF by quadrature over W:
/// the mixing law is mapped to (0,1) through its quantile function and
/// integrated with a composite Gauss-Legendre rule (nodes total `nodes`,
/// panels geometrically clustered at both endpoints, tails cut at quantile
/// level 1e-10).
class NVMixture {
public:
    NVMixture(MixingLaw mixing, double alpha, double beta, int nodes = 256)
        : mixing_(std::move(mixing)), alpha_(alpha), beta_(beta) {
        if (std::holds_alternative<DiracMix>(mixing_)) return;
        const double breaks[] = {1e-10, 1e-7, 1e-4, 1e-2, 0.5,
                                 1.0 - 1e-2, 1.0 - 1e-4, 1.0 - 1e-7, 1.0 - 1e-10};
        const int panels = 8;
        const int per_panel = std::max(4, nodes / panels);
        const auto& rule = gauss_legendre(per_panel);
        for (int pnl = 0; pnl < panels; ++pnl) {
            const double a = breaks[pnl], b = breaks[pnl + 1];
            const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
            for (int i = 0; i < per_panel; ++i) {
                const double u = mid + half * rule.nodes[static_cast<std::size_t>(i)];
                w_nodes_.push_back(mixing_quantile(mixing_, u));
                w_weights_.push_back(half * rule.weights[static_cast<std::size_t>(i)]);
            }
        }
    }

    const MixingLaw& mixing() const { return mixing_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    /// P(Z < x) = E Phi((x - beta - alpha W)/sqrt(W)).
    double cdf(double x) const {
        if (const auto* d = std::get_if<DiracMix>(&mixing_)) {
            if (d->w == 0.0) return x > beta_ ? 1.0 : 0.0;
            return norm_cdf((x - beta_ - alpha_ * d->w) / std::sqrt(d->w));
        }
        KahanSum acc;
        for (std::size_t i = 0; i < w_nodes_.size(); ++i) {
            const double w = w_nodes_[i];
            acc.add(w_weights_[i] * norm_cdf((x - beta_ - alpha_ * w) / std::sqrt(w)));
        }
        return std::min(1.0, std::max(0.0, acc.value()));
    }

    /// Density E[phi((x - beta - alpha W)/sqrt(W)) / sqrt(W)].
    double pdf(double x) const {
        if (const auto* d = std::get_if<DiracMix>(&mixing_)) {
            if (d->w == 0.0)
                return x == beta_ ? std::numeric_limits<double>::infinity() : 0.0;
            const double s = std::sqrt(d->w);
            return norm_pdf((x - beta_ - alpha_ * d->w) / s) / s;
        }
        KahanSum acc;
        for (std::size_t i = 0; i < w_nodes_.size(); ++i) {
            const double w = w_nodes_[i];
            const double s = std::sqrt(w);
            acc.add(w_weights_[i] * norm_pdf((x - beta_ - alpha_ * w) / s) / s);
        }
        return acc.value();
    }

    /// Draw W from the mixing law, then the conditional normal.
    double sample(RandomStream& rng) const {
        const double w = mixing_sample(mixing_, rng);
        if (w == 0.0) return beta_;
        return beta_ + alpha_ * w + std::sqrt(w) * rng.standard_normal();
    }

    /// Range carrying all but ~1e-9 of the mass, for probe grids.
    std::pair<double, double> range() const {
        double wl, wh;
        if (const auto* d = std::get_if<DiracMix>(&mixing_)) {
            wl = wh = d->w;
        } else {
            wl = mixing_quantile(mixing_, 1e-9);
            wh = mixing_quantile(mixing_, 1.0 - 1e-9);
        }
        const double spread = 7.0 * std::sqrt(std::max(wh, 1e-12));
        const double m1 = beta_ + alpha_ * wl, m2 = beta_ + alpha_ * wh;
        return {std::min(m1, m2) - spread, std::max(m1, m2) + spread};
    }

private:
    MixingLaw mixing_;
    double alpha_;
    double beta_;
    std::vector<double> w_nodes_;
    std::vector<double> w_weights_;
};

/// Linear-interpolation table over a mixture CDF; keeps Levy/KS probe loops
/// cheap. The builder refines until interpolation error at panel midpoints
/// is below tol.
inline AnalyticCdf tabulated_cdf(const NVMixture& m, double tol = 1e-8) {
    const auto [lo, hi] = m.range();
    if (std::holds_alternative<DiracMix>(m.mixing()) &&
        std::get<DiracMix>(m.mixing()).w == 0.0) {
        // degenerate point mass: evaluate directly
        return AnalyticCdf{[m](double x) { return m.cdf(x); }, lo - 1.0, hi + 1.0};
    }
    std::size_t n = 8192;
    for (int attempt = 0; attempt < 3; ++attempt, n *= 2) {
        auto table = std::make_shared<std::vector<double>>(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            (*table)[i] = m.cdf(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
        double worst = 0.0;
        for (std::size_t i = 0; i < 64; ++i) {
            const double x = lo + (hi - lo) * (i + 0.5) / 64.0;
            const double pos = (x - lo) / (hi - lo) * static_cast<double>(n);
            const std::size_t idx = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(idx);
            const double interp = (*table)[idx] * (1.0 - frac) + (*table)[idx + 1] * frac;
            worst = std::max(worst, std::fabs(interp - m.cdf(x)));
        }
        if (worst > tol && attempt + 1 < 3) continue;
        const double a = lo, b = hi;
        const std::size_t nn = n;
        auto f = [table, a, b, nn](double x) -> double {
            if (x <= a) return (*table)[0] * std::exp((x - a));  // decays below the range
            if (x >= b) return 1.0 - (1.0 - (*table)[nn]) * std::exp(-(x - b));
            const double pos = (x - a) / (b - a) * static_cast<double>(nn);
            const std::size_t idx = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(idx);
            return (*table)[idx] * (1.0 - frac) + (*table)[idx + 1] * frac;
        };
        return AnalyticCdf{std::move(f), a, b};
    }
    throw std::logic_error("tabulated_cdf: unreachable");
}

/// Joint CDF handle of the pair (sqrt(W), alpha W + beta): the two
/// coordinates are monotone functions of W, so the joint CDF reduces to the
/// mixing CDF at a threshold.
inline AnalyticPairCdf pair_law_of_mixture(const MixingLaw& mixing, double alpha, double beta) {
    return AnalyticPairCdf{[mixing, alpha, beta](double u, double v) -> double {
        if (u <= 0.0) return 0.0;
        const double wu = u * u;  // sqrt(W) < u
        if (alpha > 0.0) {
            const double wv = (v - beta) / alpha;
            if (wv <= 0.0) return 0.0;
            return mixing_cdf(mixing, std::min(wu, wv));
        }
        if (alpha < 0.0) {
            const double wv = (v - beta) / alpha;  // W > wv
            const double hi = mixing_cdf(mixing, wu);
            const double lo = mixing_cdf(mixing, std::max(wv, 0.0));
            return std::max(0.0, hi - lo);
        }
        return v > beta ? mixing_cdf(mixing, wu) : 0.0;
    }};
}

}  // namespace randsum
