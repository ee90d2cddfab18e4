#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "oracle_utils.hpp"
#include "randsum/cf_engine.hpp"
#include "randsum/distributions.hpp"
#include "randsum/rng.hpp"

using namespace randsum;
using Catch::Approx;

namespace {

std::vector<SummandFamily> catalog() {
    return {Normal(0.0, 1.0),        Normal(5.0, 2.0),
            Uniform(0.0, 1.0),       Uniform(-1.0, 1.0),
            TwoPoint(-1.0, 3.0, 0.75), TwoPoint(-1.0, 1.0, 0.5),
            ShiftedExponential(1.0, 0.0), ShiftedExponential(2.5, -1.0)};
}

}  // namespace

TEST_CASE("exact means") {
    CHECK(mean(Normal(0.0, 1.0)) == 0.0);
    CHECK(mean(Uniform(0.0, 2.0)) == Approx(1.0));
    // direct weighted sum: -1*0.75 + 3*0.25
    CHECK(mean(TwoPoint(-1.0, 3.0, 0.75)) == Approx(0.0).margin(1e-15));
    CHECK(mean(ShiftedExponential(2.0, 1.0)) == Approx(1.5));
}

TEST_CASE("exact variances") {
    CHECK(variance(Normal(5.0, 2.0)) == Approx(4.0));
    const double quad = oracle::expect(Uniform(0.0, 1.0),
                                       [](double x) { return (x - 0.5) * (x - 0.5); });
    CHECK(variance(Uniform(0.0, 1.0)) == Approx(quad).epsilon(1e-10));
    CHECK(variance(Uniform(0.0, 1.0)) == Approx(1.0 / 12.0));
    // weighted sum of squared deviations about the zero mean
    CHECK(variance(TwoPoint(-1.0, 3.0, 0.75)) == Approx(3.0));
}

TEST_CASE("characteristic function closed forms") {
    for (const auto& fam : catalog()) {
        CHECK(cf(fam, 0.0) == std::complex<double>(1.0, 0.0));
    }
    for (double t : {0.3, 1.0, 4.0}) {
        CHECK(cf(Normal(0.0, 1.0), t).real() == Approx(std::exp(-0.5 * t * t)));
        CHECK(cf(Normal(0.0, 1.0), t).imag() == Approx(0.0).margin(1e-15));
    }
    CHECK(std::abs(cf(Uniform(-1.0, 1.0), kPi)) == Approx(0.0).margin(1e-12));
    // numerical quadrature of E exp(itX) for each family
    for (const auto& fam : catalog()) {
        for (double t : {0.5, 2.0}) {
            const auto expected = oracle::cf_by_quadrature(fam, t);
            CHECK(std::abs(cf(fam, t) - expected) < 1e-9);
        }
    }
}

TEST_CASE("cf is bounded by one with cf(0)=1") {
    for (const auto& fam : catalog()) {
        for (int i = 0; i <= 200; ++i) {
            const double t = -20.0 + 0.2 * i;
            CHECK(std::abs(cf(fam, t)) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("truncated second moment: boundary values and monotonicity") {
    for (const auto& fam : catalog()) {
        CHECK(truncated_second_moment(fam, 0.0) == Approx(variance(fam)).epsilon(1e-14));
        double prev = truncated_second_moment(fam, 0.0);
        for (double c = 0.1; c < 12.0; c += 0.1) {
            const double cur = truncated_second_moment(fam, c);
            CHECK(cur <= prev + 1e-14);
            CHECK(cur >= 0.0);
            prev = cur;
        }
        CHECK(truncated_second_moment(fam, 60.0 * std::sqrt(variance(fam))) < 1e-8);
    }
    CHECK(truncated_second_moment(Uniform(-1.0, 1.0), 1.0) == 0.0);
}

TEST_CASE("truncated second moment matches quadrature") {
    // adaptive-quadrature oracle of the tail integral, 1e-10 agreement
    const double c = 1.0;
    const double expected = oracle::expect(Normal(0.0, 1.0), [c](double x) {
        return std::fabs(x) > c ? x * x : 0.0;
    });
    CHECK(truncated_second_moment(Normal(0.0, 1.0), c) == Approx(expected).margin(1e-10));

    for (const auto& fam :
         {SummandFamily(ShiftedExponential(1.0, 0.0)), SummandFamily(ShiftedExponential(2.5, 3.0)),
          SummandFamily(Normal(2.0, 0.5)), SummandFamily(TwoPoint(-1.0, 3.0, 0.75))}) {
        const double mu = mean(fam);
        for (double cc : {0.0, 0.2, 0.5, 1.1, 2.5}) {
            const double want = oracle::expect(fam, [&](double x) {
                return std::fabs(x - mu) > cc ? (x - mu) * (x - mu) : 0.0;
            });
            CHECK(truncated_second_moment(fam, cc) == Approx(want).margin(2e-9));
        }
    }
}

TEST_CASE("third absolute central moment") {
    const double norm_expected =
        oracle::expect(Normal(0.0, 1.0), [](double x) { return std::fabs(x * x * x); });
    CHECK(third_abs_central_moment(Normal(0.0, 1.0)) == Approx(norm_expected).margin(1e-10));
    CHECK(third_abs_central_moment(Normal(0.0, 1.0)) == Approx(2.0 * std::sqrt(2.0 / kPi)));
    CHECK(third_abs_central_moment(TwoPoint(-1.0, 1.0, 0.5)) == Approx(1.0));
    const double unif_expected = oracle::expect(
        Uniform(-1.0, 1.0), [](double x) { return std::fabs(x) * x * x; });
    CHECK(third_abs_central_moment(Uniform(-1.0, 1.0)) == Approx(unif_expected).margin(1e-10));
    CHECK(third_abs_central_moment(Uniform(-1.0, 1.0)) == Approx(0.25));
    const SummandFamily se = ShiftedExponential(1.7, 0.4);
    const double mu = mean(se);
    const double se_expected = oracle::expect(
        se, [mu](double x) { return std::fabs(x - mu) * (x - mu) * (x - mu); });
    CHECK(third_abs_central_moment(se) == Approx(se_expected).margin(1e-9));
}

TEST_CASE("closed-form moments agree with quadrature across the catalog") {
    for (const auto& fam : catalog()) {
        const double m = oracle::expect(fam, [](double x) { return x; });
        CHECK(mean(fam) == Approx(m).margin(1e-8));
        const double mu = mean(fam);
        const double v = oracle::expect(fam, [mu](double x) { return (x - mu) * (x - mu); });
        CHECK(variance(fam) == Approx(v).margin(1e-8));
        const double nu3 = oracle::expect(
            fam, [mu](double x) { return std::fabs(x - mu) * (x - mu) * (x - mu); });
        CHECK(third_abs_central_moment(fam) == Approx(nu3).margin(1e-8));
    }
}

TEST_CASE("sampler moments at one million draws") {
    RandomStream rng = substream(20240811u, 1u);
    std::vector<double> zs(1000000);
    const SummandFamily norm = Normal(0.0, 1.0);
    for (auto& z : zs) z = sample(norm, rng);
    CHECK(std::fabs(oracle::sample_mean(zs)) < 4.0 / std::sqrt(1e6));

    const SummandFamily unif = Uniform(0.0, 1.0);
    for (auto& z : zs) z = sample(unif, rng);
    CHECK(std::fabs(oracle::sample_variance(zs) - 1.0 / 12.0) < 1e-3);
}

TEST_CASE("fixed seed reproduces the draw sequence") {
    const SummandFamily fam = ShiftedExponential(2.0, -1.0);
    RandomStream a = substream(7u, 3u, 1u);
    RandomStream b = substream(7u, 3u, 1u);
    for (int i = 0; i < 1000; ++i) CHECK(sample(fam, a) == sample(fam, b));
    RandomStream c = substream(7u, 3u, 2u);
    bool all_equal = true;
    RandomStream a2 = substream(7u, 3u, 1u);
    for (int i = 0; i < 100; ++i) all_equal = all_equal && (sample(fam, a2) == sample(fam, c));
    CHECK_FALSE(all_equal);
}

TEST_CASE("empirical cf tracks the analytic cf") {
    for (const auto& fam : {SummandFamily(Uniform(-1.0, 1.0)),
                            SummandFamily(TwoPoint(-1.0, 3.0, 0.75))}) {
        RandomStream rng = substream(99u, 5u);
        std::vector<double> draws(100000);
        for (auto& d : draws) d = sample(fam, rng);
        const EmpiricalDistribution emp(std::move(draws));
        for (int i = 1; i <= 20; ++i) {
            const double t = -5.0 + 0.5 * i;
            CHECK(std::abs(empirical_cf(emp, t) - cf(fam, t)) < 5.0 / std::sqrt(1e5));
        }
    }
}

TEST_CASE("normal quantile inverts the normal cdf") {
    for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-6}) {
        CHECK(norm_cdf(norm_quantile(p)) == Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Normal(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Uniform(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TwoPoint(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ShiftedExponential(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(truncated_second_moment(Normal(0.0, 1.0), -0.5), std::domain_error);
}
