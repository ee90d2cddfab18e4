#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "randsum/distributions.hpp"
#include "randsum/index_laws.hpp"
#include "randsum/math_utils.hpp"
#include "randsum/metrics.hpp"
#include "randsum/parallel.hpp"
#include "randsum/scheme.hpp"

namespace randsum {

namespace detail {

/// Sum over j <= k of the truncated central second moments at threshold c,
/// using the periodic phase structure when available.
class LindebergInner {
public:
    explicit LindebergInner(const ArrayRow& row)
        : row_(row), period_(pattern_period(row.pattern())) {
        for (int g = 0; g < period_; ++g)
            fams_.push_back(make_family(row.shape(), 0.0, row.sigma(g + 1)));
    }

    /// Value of (1/B^2_k) * sum_j tau_j(eps * B_k); always in [0, 1].
    double at(std::int64_t k, double eps) const {
        const double b2 = row_.variance_sum(k);
        const double c = eps * std::sqrt(b2);
        KahanSum acc;
        if (period_ > 0) {
            for (int g = 0; g < period_; ++g)
                acc.add(static_cast<double>(phase_count(k, period_, g)) *
                        truncated_second_moment(fams_[static_cast<std::size_t>(g)], c));
        } else {
            for (std::int64_t j = 1; j <= k; ++j)
                acc.add(truncated_second_moment(make_family(row_.shape(), 0.0, row_.sigma(j)), c));
        }
        return acc.value() / b2;
    }

private:
    const ArrayRow& row_;
    int period_;
    std::vector<SummandFamily> fams_;
};

}  // namespace detail

/// Random Lindeberg value: expectation over the truncated index support of
/// the classical Lindeberg ratio at the random index. Exact (closed-form
/// truncated moments); values below 1e-14 clamp to 0 to silence roundoff
/// in bounded-support cases.
inline double random_lindeberg(const ArrayRow& row, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("random_lindeberg: eps must be > 0");
    const detail::LindebergInner inner(row);
    const auto& sup = row.support();
    KahanSum acc;
    for (std::size_t i = 0; i < sup.weights.size(); ++i)
        acc.add(sup.weights[i] * inner.at(sup.k_min + static_cast<std::int64_t>(i), eps));
    double v = acc.value();
    if (v < 1e-14) v = 0.0;
    return std::min(v, 1.0);
}

/// In-probability form: per-replicate values of the inner Lindeberg ratio
/// with the index drawn at random. Mean reproduces random_lindeberg within
/// Monte Carlo error.
inline EmpiricalDistribution random_lindeberg_mc(const ArrayRow& row, double eps,
                                                 std::int64_t replicates, std::uint64_t seed,
                                                 int workers = 0) {
    if (!(eps > 0.0)) throw std::domain_error("random_lindeberg_mc: eps must be > 0");
    if (replicates < 1) throw std::invalid_argument("random_lindeberg_mc: replicates >= 1");
    const detail::LindebergInner inner(row);
    std::vector<double> out(static_cast<std::size_t>(replicates));
    parallel_chunks(replicates, resolve_workers(workers), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t r = b; r < e; ++r) {
            RandomStream rng =
                substream(seed, static_cast<std::uint64_t>(row.n()),
                          detail::kPurposeLindeberg, static_cast<std::uint64_t>(r));
            out[static_cast<std::size_t>(r)] = inner.at(sample(row.index(), rng), eps);
        }
    });
    return EmpiricalDistribution(std::move(out));
}

namespace detail {

inline double sigma3_sum(const ArrayRow& row, std::int64_t k) {
    const int period = pattern_period(row.pattern());
    if (period > 0) {
        double s = 0.0;
        for (int g = 0; g < period; ++g) {
            const double sg = row.sigma(g + 1);
            s += static_cast<double>(phase_count(k, period, g)) * sg * sg * sg;
        }
        return s;
    }
    KahanSum acc;
    for (std::int64_t j = 1; j <= k; ++j) {
        const double sj = row.sigma(j);
        acc.add(sj * sj * sj);
    }
    return acc.value();
}

}  // namespace detail

/// Random Lyapunov value E[M^3_N / B^3_N], exact over the truncated
/// support. M^3_k scales as (standardized third absolute moment) times the
/// partial sum of sigma^3.
inline double random_lyapunov(const ArrayRow& row) {
    const double nu3 = third_abs_central_moment(make_family(row.shape(), 0.0, 1.0));
    const auto& sup = row.support();
    KahanSum acc;
    for (std::size_t i = 0; i < sup.weights.size(); ++i) {
        const std::int64_t k = sup.k_min + static_cast<std::int64_t>(i);
        const double b2 = row.variance_sum(k);
        acc.add(sup.weights[i] * nu3 * detail::sigma3_sum(row, k) / (b2 * std::sqrt(b2)));
    }
    return acc.value();
}

/// Generating-function bound (nu^3/sigma^3) * sqrt(int_0^1 psi(s)/s ds),
/// an upper bound on the random Lyapunov value for i.i.d. rows. Throws on
/// heterogeneous rows, where the bound does not apply.
inline double lyapunov_gf_bound(const ArrayRow& row) {
    if (pattern_period(row.pattern()) != 1)
        throw std::invalid_argument(
            "lyapunov_gf_bound: row is not i.i.d. (requires the constant variance pattern)");
    const double nu3 = third_abs_central_moment(make_family(row.shape(), 0.0, 1.0));
    return nu3 * std::sqrt(psi_integral(row.index()));
}

/// Per-row condition summary for reporting.
struct ConditionReport {
    std::int64_t n = 0;
    std::map<double, double> lindeberg;  // eps -> value
    double lyapunov = 0.0;
    double gf_bound = std::numeric_limits<double>::quiet_NaN();  // NaN when inapplicable
    std::string method = "exact";
    double truncation_slack = 0.0;
};

inline ConditionReport build_condition_report(const ArrayRow& row,
                                              const std::vector<double>& eps_sweep) {
    ConditionReport rep;
    rep.n = row.n();
    for (double eps : eps_sweep) rep.lindeberg[eps] = random_lindeberg(row, eps);
    rep.lyapunov = random_lyapunov(row);
    if (pattern_period(row.pattern()) == 1) rep.gf_bound = lyapunov_gf_bound(row);
    rep.truncation_slack = row.support().tail_mass;
    return rep;
}

}  // namespace randsum
