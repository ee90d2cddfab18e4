#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "randsum/math_utils.hpp"

namespace randsum {

/// Weighted sorted sample. CDF convention is P(Z < x) throughout: the step
/// CDF is left-continuous and counts mass strictly below x.
class EmpiricalDistribution {
public:
    EmpiricalDistribution() = default;

    explicit EmpiricalDistribution(std::vector<double> draws) : values_(std::move(draws)) {
        std::sort(values_.begin(), values_.end());
    }

    EmpiricalDistribution(std::vector<double> values, std::vector<double> weights)
        : values_(std::move(values)), weights_(std::move(weights)) {
        if (values_.size() != weights_.size())
            throw std::invalid_argument("EmpiricalDistribution: size mismatch");
        std::vector<std::size_t> order(values_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
        std::vector<double> v(values_.size()), w(values_.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            v[i] = values_[order[i]];
            w[i] = weights_[order[i]];
        }
        values_ = std::move(v);
        weights_ = std::move(w);
        cum_.resize(weights_.size());
        KahanSum acc;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            if (weights_[i] < 0.0)
                throw std::invalid_argument("EmpiricalDistribution: negative weight");
            acc.add(weights_[i]);
            cum_[i] = acc.value();
        }
        if (std::fabs(acc.value() - 1.0) > 1e-9)
            throw std::invalid_argument("EmpiricalDistribution: weights must sum to 1");
    }

    bool empty() const { return values_.empty(); }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

    /// P(Z < x), strict.
    double cdf(double x) const {
        if (values_.empty()) throw std::logic_error("EmpiricalDistribution: empty sample");
        const auto it = std::lower_bound(values_.begin(), values_.end(), x);
        const std::size_t idx = static_cast<std::size_t>(it - values_.begin());
        if (weights_.empty()) return static_cast<double>(idx) / static_cast<double>(values_.size());
        return idx == 0 ? 0.0 : cum_[idx - 1];
    }

private:
    std::vector<double> values_;
    std::vector<double> weights_;  // empty => uniform
    std::vector<double> cum_;
};

/// Analytic CDF handle: an evaluator plus a range that carries essentially
/// all of the mass (used to lay probe grids).
struct AnalyticCdf {
    std::function<double(double)> f;
    double lo = 0.0;
    double hi = 0.0;
};

using EvaluableCdf = std::variant<EmpiricalDistribution, AnalyticCdf>;

namespace detail {

inline double cdf_at(const EvaluableCdf& F, double x) {
    if (const auto* e = std::get_if<EmpiricalDistribution>(&F)) return e->cdf(x);
    return std::get<AnalyticCdf>(F).f(x);
}

inline bool is_empirical(const EvaluableCdf& F) {
    return std::holds_alternative<EmpiricalDistribution>(F);
}

inline std::pair<double, double> cdf_range(const EvaluableCdf& F) {
    if (const auto* e = std::get_if<EmpiricalDistribution>(&F)) {
        if (e->empty()) throw std::logic_error("cdf_range: empty sample");
        return {e->values().front(), e->values().back()};
    }
    const auto& a = std::get<AnalyticCdf>(F);
    return {a.lo, a.hi};
}

constexpr double kNudge = 1e-9;

/// Probe points where step CDFs change value, nudged into the interior of
/// each constancy interval.
inline void append_breaks(const EvaluableCdf& F, double shift, std::vector<double>& out) {
    if (const auto* e = std::get_if<EmpiricalDistribution>(&F)) {
        for (double v : e->values()) {
            out.push_back(v + shift);
            out.push_back(v + shift + kNudge);
        }
    }
}

/// sup_x [F_hi(x) - F_lo(x + shift)] over the probe set.
inline double sup_diff(const EvaluableCdf& F_hi, const EvaluableCdf& F_lo, double shift,
                       const std::vector<double>& grid) {
    std::vector<double> xs;
    append_breaks(F_hi, 0.0, xs);
    append_breaks(F_lo, -shift, xs);
    double best = 0.0;
    auto probe = [&](double x) {
        const double d = cdf_at(F_hi, x) - cdf_at(F_lo, x + shift);
        if (d > best) best = d;
    };
    for (double x : xs) probe(x);
    for (double x : grid) probe(x);
    return best;
}

inline std::vector<double> shared_grid(const EvaluableCdf& F1, const EvaluableCdf& F2,
                                       int points = 10000) {
    // dense grid only needed when an analytic side has smooth variation
    if (is_empirical(F1) && is_empirical(F2)) return {};
    auto [a1, b1] = cdf_range(F1);
    auto [a2, b2] = cdf_range(F2);
    const double lo = std::min(a1, a2);
    const double hi = std::max(b1, b2);
    const double pad = 0.05 * (hi - lo) + 1.0;
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] =
            (lo - pad) + (hi - lo + 2.0 * pad) * i / static_cast<double>(points - 1);
    return g;
}

}  // namespace detail

/// Kolmogorov-Smirnov distance sup |F1 - F2| over the merged probe set.
inline double ks(const EvaluableCdf& F1, const EvaluableCdf& F2) {
    const auto grid = detail::shared_grid(F1, F2);
    return std::max(detail::sup_diff(F1, F2, 0.0, grid), detail::sup_diff(F2, F1, 0.0, grid));
}

/// Levy distance: inf{y >= 0 : F2(x-y)-y <= F1(x) <= F2(x+y)+y for all x},
/// computed by bisection to the given absolute tolerance. Exact breakpoint
/// probing for step CDFs; a dense grid augments analytic CDFs.
inline double levy(const EvaluableCdf& F1, const EvaluableCdf& F2, double tol = 1e-6) {
    const auto grid = detail::shared_grid(F1, F2);
    auto feasible = [&](double y) {
        if (detail::sup_diff(F1, F2, y, grid) > y) return false;
        return detail::sup_diff(F2, F1, y, grid) <= y;
    };
    if (feasible(0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;  // the Levy distance never exceeds 1
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

/// Paired sample for the two-dimensional metric.
struct PairedSample {
    std::vector<double> u;
    std::vector<double> v;
    std::size_t size() const { return u.size(); }
};

/// Analytic joint law handle: F(u, v) = P(U < u, V < v).
struct AnalyticPairCdf {
    std::function<double(double, double)> f;
};

namespace detail {

inline std::vector<double> quantile_anchors(std::vector<double> pool, int levels) {
    std::sort(pool.begin(), pool.end());
    std::vector<double> anchors(static_cast<std::size_t>(levels));
    const std::size_t n = pool.size();
    for (int i = 0; i < levels; ++i) {
        const double q = (i + 0.5) / levels;
        std::size_t idx = static_cast<std::size_t>(q * n);
        if (idx >= n) idx = n - 1;
        anchors[static_cast<std::size_t>(i)] = pool[idx];
    }
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
    return anchors;
}

/// Joint ECDF (strict on both axes) of a paired sample on the anchor grid,
/// by a sweep over the u-axis with counting into v-cells.
inline std::vector<std::vector<double>> joint_ecdf_grid(const PairedSample& s,
                                                        const std::vector<double>& us,
                                                        const std::vector<double>& vs) {
    const std::size_t n = s.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return s.u[a] < s.u[b]; });
    std::vector<std::vector<double>> out(us.size(), std::vector<double>(vs.size(), 0.0));
    std::vector<std::int64_t> cell(vs.size() + 1, 0);
    std::size_t next = 0;
    for (std::size_t i = 0; i < us.size(); ++i) {
        while (next < n && s.u[order[next]] < us[i]) {
            const double v = s.v[order[next]];
            // point contributes to every v-level strictly above v
            const auto it = std::upper_bound(vs.begin(), vs.end(), v);
            cell[static_cast<std::size_t>(it - vs.begin())] += 1;
            ++next;
        }
        std::int64_t run = 0;
        for (std::size_t j = 0; j < vs.size(); ++j) {
            run += cell[j];
            out[i][j] = static_cast<double>(run) / static_cast<double>(n);
        }
    }
    return out;
}

}  // namespace detail

/// Two-dimensional weak-convergence metric: the bivariate Kolmogorov
/// statistic on a quantile-anchored grid (default 100 x 100).
inline double weak2d(const PairedSample& A, const std::variant<PairedSample, AnalyticPairCdf>& B,
                     int levels = 100) {
    if (A.size() == 0) throw std::invalid_argument("weak2d: empty sample");
    std::vector<double> upool = A.u;
    std::vector<double> vpool = A.v;
    const auto* bs = std::get_if<PairedSample>(&B);
    if (bs != nullptr) {
        if (bs->size() == 0) throw std::invalid_argument("weak2d: empty sample");
        upool.insert(upool.end(), bs->u.begin(), bs->u.end());
        vpool.insert(vpool.end(), bs->v.begin(), bs->v.end());
    }
    const auto us = detail::quantile_anchors(std::move(upool), levels);
    const auto vs = detail::quantile_anchors(std::move(vpool), levels);
    const auto fa = detail::joint_ecdf_grid(A, us, vs);
    double best = 0.0;
    if (bs != nullptr) {
        const auto fb = detail::joint_ecdf_grid(*bs, us, vs);
        for (std::size_t i = 0; i < us.size(); ++i)
            for (std::size_t j = 0; j < vs.size(); ++j)
                best = std::max(best, std::fabs(fa[i][j] - fb[i][j]));
    } else {
        const auto& law = std::get<AnalyticPairCdf>(B);
        for (std::size_t i = 0; i < us.size(); ++i)
            for (std::size_t j = 0; j < vs.size(); ++j)
                best = std::max(best, std::fabs(fa[i][j] - law.f(us[i], vs[j])));
    }
    return best;
}

}  // namespace randsum
