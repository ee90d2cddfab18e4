#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "randsum/distributions.hpp"
#include "randsum/index_laws.hpp"
#include "randsum/math_utils.hpp"
#include "randsum/metrics.hpp"
#include "randsum/parallel.hpp"

namespace randsum {

// Row-wise variance profiles. The power-law exponent is capped at 1/4 so
// that max_j sigma_j^2 / B_k^2 -> 0 and the Lindeberg condition stays
// satisfiable.

struct ConstantVar {
    double sigma;
    explicit ConstantVar(double s) : sigma(s) {
        if (!(s > 0.0)) throw std::invalid_argument("ConstantVar: sigma must be > 0");
    }
};

struct AlternatingVar {
    double a;  // odd positions
    double b;  // even positions
    AlternatingVar(double a_, double b_) : a(a_), b(b_) {
        if (!(a > 0.0 && b > 0.0))
            throw std::invalid_argument("AlternatingVar: sigmas must be > 0");
    }
};

struct PowerLawVar {
    double sigma;
    double gamma;  // sigma_j = sigma * j^gamma
    PowerLawVar(double s, double g) : sigma(s), gamma(g) {
        if (!(s > 0.0)) throw std::invalid_argument("PowerLawVar: sigma must be > 0");
        if (!(std::fabs(g) <= 0.25))
            throw std::invalid_argument("PowerLawVar: |gamma| must be <= 1/4");
    }
};

using VariancePattern = std::variant<ConstantVar, AlternatingVar, PowerLawVar>;

inline double sigma_at(const VariancePattern& p, std::int64_t j) {
    return std::visit(
        [j](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantVar>) return v.sigma;
            if constexpr (std::is_same_v<T, AlternatingVar>) return (j % 2 == 1) ? v.a : v.b;
            if constexpr (std::is_same_v<T, PowerLawVar>)
                return v.sigma * std::pow(static_cast<double>(j), v.gamma);
        },
        p);
}

/// Number of distinct sigma phases when the pattern is periodic; 0 when it
/// is not (power law).
inline int pattern_period(const VariancePattern& p) {
    if (std::holds_alternative<ConstantVar>(p)) return 1;
    if (std::holds_alternative<AlternatingVar>(p)) return 2;
    return 0;
}

/// Count of positions j <= k with (j-1) % period == phase.
inline std::int64_t phase_count(std::int64_t k, int period, int phase) {
    const std::int64_t off = k - 1 - phase;
    return off < 0 ? 0 : off / period + 1;
}

// Summand shape up to location and scale; the scheme assigns the mean (by
// the moment rule of the active mode) and the standard deviation (by the
// variance pattern).

struct NormalShape {};
struct UniformShape {};
struct TwoPointShape {
    double p;
    explicit TwoPointShape(double p_) : p(p_) {
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("TwoPointShape: p in (0,1)");
    }
};
struct ShiftedExpShape {};

using ShapeTemplate = std::variant<NormalShape, UniformShape, TwoPointShape, ShiftedExpShape>;

/// Family of the given shape with exactly the requested mean and sigma.
inline SummandFamily make_family(const ShapeTemplate& shape, double mu, double sigma) {
    return std::visit(
        [mu, sigma](const auto& s) -> SummandFamily {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, NormalShape>) return Normal(mu, sigma);
            if constexpr (std::is_same_v<T, UniformShape>) {
                const double h = std::sqrt(3.0) * sigma;
                return Uniform(mu - h, mu + h);
            }
            if constexpr (std::is_same_v<T, TwoPointShape>) {
                const double q = 1.0 - s.p;
                return TwoPoint(mu + sigma * std::sqrt(q / s.p), mu - sigma * std::sqrt(s.p / q),
                                s.p);
            }
            if constexpr (std::is_same_v<T, ShiftedExpShape>)
                return ShiftedExponential(1.0 / sigma, mu - sigma);
        },
        shape);
}

/// alpha_n = base + drift / sqrt(n).
struct AlphaRule {
    double base = 0.0;
    double drift = 0.0;
    double at(std::int64_t n) const { return base + drift / std::sqrt(static_cast<double>(n)); }
};

/// Index law family with the varying parameter either fixed or tied to the
/// row index n (k = n, p = 1/n, or mean = n).
struct IndexRule {
    enum class Kind { deterministic, geometric, mixed_poisson_gamma };
    Kind kind = Kind::deterministic;
    bool tracks_n = true;
    double value = 0.0;  // k, p, or mean when !tracks_n
    double shape = 1.0;  // r for mixed_poisson_gamma

    IndexLaw at(std::int64_t n) const {
        switch (kind) {
            case Kind::deterministic:
                return Deterministic(tracks_n ? n : static_cast<std::int64_t>(value));
            case Kind::geometric:
                return Geometric(tracks_n ? 1.0 / static_cast<double>(n) : value);
            case Kind::mixed_poisson_gamma:
                return MixedPoissonGamma(shape, tracks_n ? static_cast<double>(n) : value);
        }
        throw std::logic_error("IndexRule: bad kind");
    }
};

struct Theorem4Mode {};

struct GeneralMode {
    double rho = 1.0;
    AlphaRule beta;  // beta_n, same base + drift/sqrt(n) form
};

using SchemeMode = std::variant<Theorem4Mode, GeneralMode>;

/// Full double-array construction: shape + variance pattern + index rule +
/// proportional centering constants.
struct DoubleArrayScheme {
    ShapeTemplate shape = NormalShape{};
    VariancePattern pattern = ConstantVar(1.0);
    IndexRule index_rule;
    AlphaRule alpha_rule;
    SchemeMode mode = Theorem4Mode{};
    double trunc_eps = 1e-12;
    std::int64_t trunc_cap = 10000000;
};

/// One row of the double array with all constants resolved: truncated index
/// support, variance prefix sums, the norming scale d = sqrt(E B^2_N) and
/// centering c. Means are assigned only after d is known (the variance
/// prefix does not depend on them, which resolves the apparent circularity
/// of the mean rule).
class ArrayRow {
public:
    ArrayRow(const DoubleArrayScheme& scheme, std::int64_t n)
        : n_(n),
          shape_(scheme.shape),
          pattern_(scheme.pattern),
          index_(scheme.index_rule.at(n)),
          trunc_(truncate(index_, scheme.trunc_eps, scheme.trunc_cap)),
          alpha_n_(scheme.alpha_rule.at(n)) {
        if (n < 1) throw std::invalid_argument("ArrayRow: n must be >= 1");
        if (const auto* gen = std::get_if<GeneralMode>(&scheme.mode)) {
            rho_ = gen->rho;
            beta_n_ = gen->beta.at(n);
            theorem4_ = false;
            if (!(rho_ > 0.0)) throw std::invalid_argument("GeneralMode: rho must be > 0");
        }
        const std::int64_t kmax = trunc_.k_max();
        b2_prefix_.resize(static_cast<std::size_t>(kmax) + 1, 0.0);
        KahanSum acc;
        for (std::int64_t j = 1; j <= kmax; ++j) {
            const double s = sigma_at(pattern_, j);
            acc.add(s * s);
            b2_prefix_[static_cast<std::size_t>(j)] = acc.value();
        }
        KahanSum d2;
        for (std::size_t i = 0; i < trunc_.weights.size(); ++i)
            d2.add(trunc_.weights[i] * b2_prefix_[static_cast<std::size_t>(trunc_.k_min) + i]);
        d_ = std::sqrt(d2.value());
        c_ = d_ * beta_n_;
    }

    std::int64_t n() const { return n_; }
    double alpha_n() const { return alpha_n_; }
    double beta_n() const { return beta_n_; }
    double rho() const { return rho_; }
    bool theorem4_mode() const { return theorem4_; }
    double scale() const { return d_; }  // d_n
    double shift() const { return c_; }  // c_n
    const IndexLaw& index() const { return index_; }
    const TruncatedIndex& support() const { return trunc_; }
    const ShapeTemplate& shape() const { return shape_; }
    const VariancePattern& pattern() const { return pattern_; }

    double sigma(std::int64_t j) const { return sigma_at(pattern_, j); }

    /// B^2_k: partial sum of summand variances.
    double variance_sum(std::int64_t k) const {
        if (k < 1) throw std::domain_error("variance_sum: k must be >= 1");
        if (k < static_cast<std::int64_t>(b2_prefix_.size()))
            return b2_prefix_[static_cast<std::size_t>(k)];
        return std::visit(
            [&](const auto& v) -> double {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, ConstantVar>)
                    return static_cast<double>(k) * v.sigma * v.sigma;
                else if constexpr (std::is_same_v<T, AlternatingVar>)
                    return static_cast<double>(phase_count(k, 2, 0)) * v.a * v.a +
                           static_cast<double>(phase_count(k, 2, 1)) * v.b * v.b;
                else {
                    KahanSum acc;
                    acc.add(b2_prefix_.back());
                    for (std::int64_t j = static_cast<std::int64_t>(b2_prefix_.size()); j <= k; ++j) {
                        const double s = sigma_at(pattern_, j);
                        acc.add(s * s);
                    }
                    return acc.value();
                }
            },
            pattern_);
    }

    /// Summand mean under the active mode's proportionality rule.
    double summand_mean(std::int64_t j) const {
        if (theorem4_) {
            const double s = sigma(j);
            return alpha_n_ * s * s / d_;
        }
        return mean_sum(j) - (j > 1 ? mean_sum(j - 1) : 0.0);
    }

    /// A_k: partial sum of means; identically b_k^{rho+1} alpha_n / d^rho.
    double mean_sum(std::int64_t k) const {
        const double b2 = variance_sum(k);
        if (rho_ == 1.0) return alpha_n_ * b2 / d_;
        return alpha_n_ * std::pow(b2, 0.5 * (rho_ + 1.0)) / std::pow(d_, rho_);
    }

    /// (U, V) evaluated at index value k: (b_k/d, (a_k - c)/d).
    std::pair<double, double> normalized_pair(std::int64_t k) const {
        return {std::sqrt(variance_sum(k)) / d_, (mean_sum(k) - c_) / d_};
    }

    SummandFamily family(std::int64_t j) const {
        return make_family(shape_, summand_mean(j), sigma(j));
    }

private:
    std::int64_t n_;
    ShapeTemplate shape_;
    VariancePattern pattern_;
    IndexLaw index_;
    TruncatedIndex trunc_;
    double alpha_n_;
    double beta_n_ = 0.0;
    double rho_ = 1.0;
    bool theorem4_ = true;
    double d_ = 0.0;
    double c_ = 0.0;
    std::vector<double> b2_prefix_;
};

namespace detail {

// substream purposes; keep stable so fixed seeds reproduce forever
inline constexpr std::uint64_t kPurposeZ = 1;
inline constexpr std::uint64_t kPurposeScaledVar = 2;
inline constexpr std::uint64_t kPurposePairs = 3;
inline constexpr std::uint64_t kPurposeLindeberg = 4;

}  // namespace detail

/// Replicates of Z = (S_N - c)/d. Each replicate owns the substream
/// (seed, n, purpose, replicate), so the result is bit-identical for a
/// fixed (seed, n, replicates) triple regardless of the worker count.
inline EmpiricalDistribution simulate_sample(const ArrayRow& row, std::int64_t replicates,
                                             std::uint64_t seed, int workers = 0) {
    if (replicates < 1) throw std::invalid_argument("simulate_sample: replicates must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(replicates));
    const double d = row.scale();
    const double c = row.shift();
    parallel_chunks(replicates, resolve_workers(workers), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t r = b; r < e; ++r) {
            RandomStream rng =
                substream(seed, static_cast<std::uint64_t>(row.n()), detail::kPurposeZ,
                          static_cast<std::uint64_t>(r));
            const std::int64_t k = sample(row.index(), rng);
            KahanSum s;
            for (std::int64_t j = 1; j <= k; ++j) s.add(sample(row.family(j), rng));
            out[static_cast<std::size_t>(r)] = (s.value() - c) / d;
        }
    });
    return EmpiricalDistribution(std::move(out));
}

/// Replicates of B^2_N / E B^2_N.
inline EmpiricalDistribution simulate_scaled_variance(const ArrayRow& row, std::int64_t replicates,
                                                      std::uint64_t seed, int workers = 0) {
    if (replicates < 1) throw std::invalid_argument("simulate_scaled_variance: replicates >= 1");
    std::vector<double> out(static_cast<std::size_t>(replicates));
    const double d2 = row.scale() * row.scale();
    parallel_chunks(replicates, resolve_workers(workers), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t r = b; r < e; ++r) {
            RandomStream rng =
                substream(seed, static_cast<std::uint64_t>(row.n()), detail::kPurposeScaledVar,
                          static_cast<std::uint64_t>(r));
            const std::int64_t k = sample(row.index(), rng);
            out[static_cast<std::size_t>(r)] = row.variance_sum(k) / d2;
        }
    });
    return EmpiricalDistribution(std::move(out));
}

/// Replicates of the pair (U, V) = (b_N/d, (a_N - c)/d).
inline PairedSample simulate_pairs(const ArrayRow& row, std::int64_t replicates,
                                   std::uint64_t seed, int workers = 0) {
    if (replicates < 1) throw std::invalid_argument("simulate_pairs: replicates must be >= 1");
    PairedSample out;
    out.u.resize(static_cast<std::size_t>(replicates));
    out.v.resize(static_cast<std::size_t>(replicates));
    parallel_chunks(replicates, resolve_workers(workers), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t r = b; r < e; ++r) {
            RandomStream rng =
                substream(seed, static_cast<std::uint64_t>(row.n()), detail::kPurposePairs,
                          static_cast<std::uint64_t>(r));
            const std::int64_t k = sample(row.index(), rng);
            const auto uv = row.normalized_pair(k);
            out.u[static_cast<std::size_t>(r)] = uv.first;
            out.v[static_cast<std::size_t>(r)] = uv.second;
        }
    });
    return out;
}

}  // namespace randsum
