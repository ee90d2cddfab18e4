#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>

#include "randsum/cf_engine.hpp"
#include "randsum/conditions.hpp"
#include "randsum/metrics.hpp"
#include "randsum/nvm.hpp"
#include "randsum/report.hpp"
#include "randsum/scenario.hpp"
#include "randsum/scheme.hpp"

namespace randsum {

/// Run one scenario: one report row per n, deterministic for a fixed seed
/// regardless of the worker count (timing column aside). A truncation-cap
/// failure annotates the row and the sweep continues.
inline ConvergenceReport run_scenario(const Scenario& s, int workers = 0) {
    ConvergenceReport rep;
    rep.name = s.name;
    const NVMixture limit = s.limit_mixture();
    const AnalyticCdf limit_cdf = tabulated_cdf(limit);
    const AnalyticPairCdf pair_law =
        pair_law_of_mixture(s.limit_mixing, s.limit_alpha, s.limit_beta);
    const LimitLaw row_limit = LimitLaw::standard_normal();

    for (std::int64_t n : s.n_grid) {
        ReportRow out;
        out.n = n;
        out.seed = s.seed;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const ArrayRow row(s.scheme, n);
            out.mean_index = mean_index(row.index());

            const EmpiricalDistribution z = simulate_sample(row, s.replicates, s.seed, workers);
            out.levy = levy(EvaluableCdf(z), EvaluableCdf(limit_cdf));

            const PairedSample uv = simulate_pairs(row, s.replicates, s.seed, workers);
            out.weak2d = weak2d(uv, pair_law);

            out.coherency_gap = coherency_gap(row, row_limit, s.t_report, workers);
            out.lemma1_gap = mixture_cf_gap(row, row_limit, s.t_report, workers);
            out.lindeberg_05 = random_lindeberg(row, 0.05);
            out.lyapunov = random_lyapunov(row);
        } catch (const TruncationCapError& e) {
            out.error = e.what();
        }
        out.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.rows.push_back(std::move(out));
    }
    return rep;
}

}  // namespace randsum
