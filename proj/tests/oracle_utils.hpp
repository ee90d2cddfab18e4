#pragma once

// Test-side oracles: brute-force composite-Simpson integration with
// Richardson extrapolation, density/pmf accessors for the summand catalog,
// and small statistics helpers. Deliberately independent of the library's
// closed forms and its adaptive integrator.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "randsum/distributions.hpp"

namespace oracle {

/// Composite Simpson on [a, b] with n panels (n even).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4096) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

/// Simpson with one Richardson step; adequate to ~1e-12 for smooth f.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int n = 8192) {
    const double c = simpson(f, a, b, n);
    const double fine = simpson(f, a, b, 2 * n);
    return fine + (fine - c) / 15.0;
}

/// Density of a summand family (two-point handled by the caller via atoms).
inline double density(const randsum::SummandFamily& fam, double x) {
    using namespace randsum;
    if (const auto* n = std::get_if<Normal>(&fam)) {
        const double z = (x - n->mu) / n->sigma;
        return std::exp(-0.5 * z * z) / (n->sigma * std::sqrt(2.0 * 3.14159265358979323846));
    }
    if (const auto* u = std::get_if<Uniform>(&fam))
        return (x >= u->lo && x <= u->hi) ? 1.0 / (u->hi - u->lo) : 0.0;
    if (const auto* s = std::get_if<ShiftedExponential>(&fam))
        return x >= s->shift ? s->rate * std::exp(-s->rate * (x - s->shift)) : 0.0;
    throw std::logic_error("oracle::density: atomic family");
}

struct Atom {
    double x;
    double p;
};

inline std::vector<Atom> atoms(const randsum::SummandFamily& fam) {
    const auto& t = std::get<randsum::TwoPoint>(fam);
    return {{t.x1, t.p}, {t.x2, 1.0 - t.p}};
}

/// Integration range covering all but ~1e-14 of a continuous family's mass.
inline std::pair<double, double> mass_range(const randsum::SummandFamily& fam) {
    using namespace randsum;
    if (const auto* n = std::get_if<Normal>(&fam))
        return {n->mu - 9.0 * n->sigma, n->mu + 9.0 * n->sigma};
    if (const auto* u = std::get_if<Uniform>(&fam)) return {u->lo, u->hi};
    const auto& s = std::get<ShiftedExponential>(fam);
    return {s.shift, s.shift + 40.0 / s.rate};
}

/// E g(X) by quadrature (continuous families) or atom sum (two-point).
inline double expect(const randsum::SummandFamily& fam,
                     const std::function<double(double)>& g) {
    if (std::holds_alternative<randsum::TwoPoint>(fam)) {
        double s = 0.0;
        for (const auto& a : atoms(fam)) s += a.p * g(a.x);
        return s;
    }
    const auto [lo, hi] = mass_range(fam);
    return integrate([&](double x) { return g(x) * density(fam, x); }, lo, hi);
}

/// Tail integral of (x - mean)^2 over |x - mean| > c, split at the
/// truncation points so each piece is smooth.
inline double truncated_second_moment_by_quadrature(const randsum::SummandFamily& fam,
                                                    double c) {
    const double mu = expect(fam, [](double x) { return x; });
    if (std::holds_alternative<randsum::TwoPoint>(fam)) {
        double s = 0.0;
        for (const auto& a : atoms(fam))
            if (std::fabs(a.x - mu) > c) s += a.p * (a.x - mu) * (a.x - mu);
        return s;
    }
    const auto [lo, hi] = mass_range(fam);
    auto g = [&](double x) { return (x - mu) * (x - mu) * density(fam, x); };
    double total = 0.0;
    if (mu - c > lo) total += integrate(g, lo, mu - c);
    if (mu + c < hi) total += integrate(g, mu + c, hi);
    return total;
}

inline std::complex<double> cf_by_quadrature(const randsum::SummandFamily& fam, double t) {
    return {expect(fam, [t](double x) { return std::cos(t * x); }),
            expect(fam, [t](double x) { return std::sin(t * x); })};
}

inline double sample_mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
    const double m = sample_mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

/// chi-square quantile by Wilson-Hilferty (adequate for test gates).
inline double chi2_quantile(double q, double dof, double z_q) {
    (void)q;
    const double t = 1.0 - 2.0 / (9.0 * dof) + z_q * std::sqrt(2.0 / (9.0 * dof));
    return dof * t * t * t;
}

}  // namespace oracle
