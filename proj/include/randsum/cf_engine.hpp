#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "randsum/math_utils.hpp"
#include "randsum/metrics.hpp"
#include "randsum/parallel.hpp"
#include "randsum/scheme.hpp"

namespace randsum {

/// Row-wise limit law: characteristic function and CDF. Default is the
/// standard normal, h(t) = exp(-t^2/2), H = Phi.
struct LimitLaw {
    std::function<std::complex<double>(double)> cf;
    std::function<double(double)> cdf;

    static LimitLaw standard_normal() {
        return {[](double t) { return std::complex<double>(std::exp(-0.5 * t * t), 0.0); },
                [](double x) { return norm_cdf(x); }};
    }
};

namespace detail {

inline std::complex<double> cis(double theta) {
    return {std::cos(theta), std::sin(theta)};
}

/// Centered per-phase summand families of a row (period 0 = aperiodic).
struct PhaseFamilies {
    int period;
    std::vector<SummandFamily> fams;  // one per phase when periodic

    explicit PhaseFamilies(const ArrayRow& row) : period(pattern_period(row.pattern())) {
        for (int g = 0; g < period; ++g)
            fams.push_back(make_family(row.shape(), 0.0, row.sigma(g + 1)));
    }
};

struct LogPolar {
    double logmag;
    double arg;
};

inline LogPolar log_polar(std::complex<double> z) {
    return {std::log(std::abs(z)), std::arg(z)};
}

inline std::vector<double> t_grid(double T, int points) {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = -T + 2.0 * T * i / static_cast<double>(points - 1);
    return g;
}

constexpr int kBaseGrid = 1024;

}  // namespace detail

/// CF of the centered, scaled partial sum Y_k = (S_k - A_k)/B_k: the mean
/// shifts cancel exactly, leaving the product of centered summand CFs at
/// t/B_k. Accumulated in log-polar form so large k cannot underflow.
inline std::complex<double> partial_sum_cf(const ArrayRow& row, std::int64_t k, double t) {
    if (k < 1) throw std::domain_error("partial_sum_cf: k must be >= 1");
    const double bk = std::sqrt(row.variance_sum(k));
    const double tau = t / bk;
    const detail::PhaseFamilies phases(row);
    double logmag = 0.0, arg = 0.0;
    if (phases.period > 0) {
        for (int g = 0; g < phases.period; ++g) {
            const auto lp = detail::log_polar(cf(phases.fams[static_cast<std::size_t>(g)], tau));
            const double cnt = static_cast<double>(phase_count(k, phases.period, g));
            logmag += cnt * lp.logmag;
            arg += cnt * lp.arg;
        }
    } else {
        KahanSum lsum, asum;
        for (std::int64_t j = 1; j <= k; ++j) {
            const auto lp =
                detail::log_polar(cf(make_family(row.shape(), 0.0, row.sigma(j)), tau));
            lsum.add(lp.logmag);
            asum.add(lp.arg);
        }
        logmag = lsum.value();
        arg = asum.value();
    }
    return std::exp(logmag) * detail::cis(arg);
}

/// Exact CF of Z = (S_N - c)/d by total probability over the truncated
/// index support (renormalized weights).
inline std::complex<double> random_sum_cf(const ArrayRow& row, double t) {
    const double tau = t / row.scale();
    const double phase_scale = t / row.scale();
    const auto& sup = row.support();
    const detail::PhaseFamilies phases(row);
    KahanSum re, im;

    if (phases.period > 0) {
        std::vector<detail::LogPolar> lp;
        for (const auto& f : phases.fams) lp.push_back(detail::log_polar(cf(f, tau)));
        for (std::size_t i = 0; i < sup.weights.size(); ++i) {
            const std::int64_t k = sup.k_min + static_cast<std::int64_t>(i);
            double logmag = 0.0, arg = 0.0;
            for (int g = 0; g < phases.period; ++g) {
                const double cnt = static_cast<double>(phase_count(k, phases.period, g));
                logmag += cnt * lp[static_cast<std::size_t>(g)].logmag;
                arg += cnt * lp[static_cast<std::size_t>(g)].arg;
            }
            const double theta = arg + (row.mean_sum(k) - row.shift()) * phase_scale;
            const double mag = sup.weights[i] * std::exp(logmag);
            re.add(mag * std::cos(theta));
            im.add(mag * std::sin(theta));
        }
    } else {
        KahanSum lsum, asum;
        std::int64_t j = 1;
        auto fold = [&](std::int64_t upto) {
            for (; j <= upto; ++j) {
                const auto lp =
                    detail::log_polar(cf(make_family(row.shape(), 0.0, row.sigma(j)), tau));
                lsum.add(lp.logmag);
                asum.add(lp.arg);
            }
        };
        for (std::size_t i = 0; i < sup.weights.size(); ++i) {
            const std::int64_t k = sup.k_min + static_cast<std::int64_t>(i);
            fold(k);
            const double theta = asum.value() + (row.mean_sum(k) - row.shift()) * phase_scale;
            const double mag = sup.weights[i] * std::exp(lsum.value());
            re.add(mag * std::cos(theta));
            im.add(mag * std::sin(theta));
        }
    }
    return {re.value(), im.value()};
}

/// CF of the scale-location mixture Y*U + V: sum over the index support of
/// w_k exp{it(a_k - c)/d} h(t b_k / d).
inline std::complex<double> mixture_cf(const ArrayRow& row, const LimitLaw& limit, double t) {
    const auto& sup = row.support();
    const double d = row.scale();
    KahanSum re, im;
    for (std::size_t i = 0; i < sup.weights.size(); ++i) {
        const std::int64_t k = sup.k_min + static_cast<std::int64_t>(i);
        const double bk = std::sqrt(row.variance_sum(k));
        const std::complex<double> term =
            sup.weights[i] * detail::cis((row.mean_sum(k) - row.shift()) * t / d) *
            limit.cf(t * bk / d);
        re.add(term.real());
        im.add(term.imag());
    }
    return {re.value(), im.value()};
}

/// Empirical CF (1/N) sum exp(itx_i); throws on an empty sample.
inline std::complex<double> empirical_cf(const EmpiricalDistribution& sample, double t) {
    if (sample.empty()) throw std::invalid_argument("empirical_cf: empty sample");
    KahanSum re, im;
    for (double x : sample.values()) {
        re.add(std::cos(t * x));
        im.add(std::sin(t * x));
    }
    const double n = static_cast<double>(sample.size());
    return {re.value() / n, im.value() / n};
}

/// Max over the [-T, T] grid of |f_n - g_n|, with one x2 grid refinement;
/// the larger of the two sups is reported.
inline double mixture_cf_gap(const ArrayRow& row, const LimitLaw& limit, double T,
                             int workers = 0) {
    if (!(T > 0.0)) throw std::domain_error("mixture_cf_gap: T must be > 0");
    double best = 0.0;
    for (int points : {detail::kBaseGrid, 2 * detail::kBaseGrid}) {
        const auto grid = detail::t_grid(T, points);
        std::vector<double> vals(grid.size());
        parallel_chunks(static_cast<std::int64_t>(grid.size()), resolve_workers(workers),
                        [&](std::int64_t b, std::int64_t e) {
                            for (std::int64_t i = b; i < e; ++i) {
                                const double t = grid[static_cast<std::size_t>(i)];
                                vals[static_cast<std::size_t>(i)] =
                                    std::abs(random_sum_cf(row, t) - mixture_cf(row, limit, t));
                            }
                        });
        for (double v : vals) best = std::max(best, v);
    }
    return best;
}

/// Both grid sups of |f_n - g_n| (coarse first), for grid-adequacy checks.
inline std::pair<double, double> mixture_cf_gap_both(const ArrayRow& row, const LimitLaw& limit,
                                                     double T, int workers = 0) {
    std::pair<double, double> out{0.0, 0.0};
    int which = 0;
    for (int points : {detail::kBaseGrid, 2 * detail::kBaseGrid}) {
        const auto grid = detail::t_grid(T, points);
        std::vector<double> vals(grid.size());
        parallel_chunks(static_cast<std::int64_t>(grid.size()), resolve_workers(workers),
                        [&](std::int64_t b, std::int64_t e) {
                            for (std::int64_t i = b; i < e; ++i) {
                                const double t = grid[static_cast<std::size_t>(i)];
                                vals[static_cast<std::size_t>(i)] =
                                    std::abs(random_sum_cf(row, t) - mixture_cf(row, limit, t));
                            }
                        });
        double& slot = which == 0 ? out.first : out.second;
        for (double v : vals) slot = std::max(slot, v);
        ++which;
    }
    return out;
}

/// Coherency value E sup_{|t|<=T} |h_{N}(t) - h(t)| over the truncated
/// support: per-atom sups are computed independently (parallel over atoms)
/// and reduced in index order.
inline double coherency_gap(const ArrayRow& row, const LimitLaw& limit, double T,
                            int workers = 0) {
    if (!(T > 0.0)) throw std::domain_error("coherency_gap: T must be > 0");
    const auto& sup = row.support();
    const auto grid1 = detail::t_grid(T, detail::kBaseGrid);
    const auto grid2 = detail::t_grid(T, 2 * detail::kBaseGrid);
    std::vector<std::complex<double>> h1(grid1.size()), h2(grid2.size());
    for (std::size_t i = 0; i < grid1.size(); ++i) h1[i] = limit.cf(grid1[i]);
    for (std::size_t i = 0; i < grid2.size(); ++i) h2[i] = limit.cf(grid2[i]);

    const detail::PhaseFamilies phases(row);
    std::vector<double> per_atom(sup.weights.size());
    parallel_chunks(
        static_cast<std::int64_t>(sup.weights.size()), resolve_workers(workers),
        [&](std::int64_t b, std::int64_t e) {
            for (std::int64_t i = b; i < e; ++i) {
                const std::int64_t k = sup.k_min + i;
                const double bk = std::sqrt(row.variance_sum(k));
                double worst = 0.0;
                auto scan = [&](const std::vector<double>& grid,
                                const std::vector<std::complex<double>>& href) {
                    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
                        const double tau = grid[gi] / bk;
                        double logmag = 0.0, arg = 0.0;
                        if (phases.period > 0) {
                            for (int g = 0; g < phases.period; ++g) {
                                const auto lp = detail::log_polar(
                                    cf(phases.fams[static_cast<std::size_t>(g)], tau));
                                const double cnt =
                                    static_cast<double>(phase_count(k, phases.period, g));
                                logmag += cnt * lp.logmag;
                                arg += cnt * lp.arg;
                            }
                        } else {
                            KahanSum lsum, asum;
                            for (std::int64_t j = 1; j <= k; ++j) {
                                const auto lp = detail::log_polar(
                                    cf(make_family(row.shape(), 0.0, row.sigma(j)), tau));
                                lsum.add(lp.logmag);
                                asum.add(lp.arg);
                            }
                            logmag = lsum.value();
                            arg = asum.value();
                        }
                        const double diff =
                            std::abs(std::exp(logmag) * detail::cis(arg) - href[gi]);
                        if (diff > worst) worst = diff;
                    }
                };
                scan(grid1, h1);
                scan(grid2, h2);
                per_atom[static_cast<std::size_t>(i)] = worst;
            }
        });
    KahanSum acc;
    for (std::size_t i = 0; i < per_atom.size(); ++i) acc.add(sup.weights[i] * per_atom[i]);
    return acc.value();
}

}  // namespace randsum
