// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "lcr/error.hpp"
#include "lcr/specfun.hpp"
#include "lcr/specfun_detail.hpp"
#include "support/oracles.hpp"

using namespace lcr::specfun;
using oracle::rel;

TEST_CASE("ln_gamma known values") {
    CHECK(std::fabs(ln_gamma(1.0)) < 1e-15);
    CHECK(rel(ln_gamma(5.0), std::log(24.0)) < 1e-13);
    CHECK(rel(ln_gamma(0.5), 0.5723649429247001) < 1e-13);
}

TEST_CASE("ln_gamma matches std::lgamma over its range") {
    for (double x = 1e-3; x <= 1e6; x *= 1.37) {
        double ref = std::lgamma(x);
        double err = std::fabs(ln_gamma(x) - ref) / std::max(std::fabs(ref), 1.0);
        CHECK_MESSAGE(err < 1e-12, "x=" << x);
    }
}

TEST_CASE("ln_gamma domain") {
    CHECK_THROWS_AS(ln_gamma(0.0), lcr::DomainError);
    CHECK_THROWS_AS(ln_gamma(-1.5), lcr::DomainError);
    CHECK_THROWS_AS(ln_gamma(std::numeric_limits<double>::infinity()), lcr::DomainError);
    CHECK_THROWS_AS(ln_gamma(std::nan("")), lcr::DomainError);
}

TEST_CASE("regularized_lower_gamma examples") {
    CHECK(std::fabs(regularized_lower_gamma(1.0, std::log(2.0)) - 0.5) < 1e-14);
    CHECK(regularized_lower_gamma(0.7, 0.0) == 0.0);
    double ref = oracle::erf_series(std::sqrt(0.5));
    CHECK(std::fabs(ref - 0.6826894921) < 1e-10);
    CHECK(rel(regularized_lower_gamma(0.5, 0.5), ref) < 1e-10);
}

TEST_CASE("regularized_lower_gamma against erf and exponential closed forms") {
    for (double x : {1e-4, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
        CHECK(rel(regularized_lower_gamma(0.5, x), std::erf(std::sqrt(x))) < 1e-10);
        CHECK(rel(regularized_upper_gamma(0.5, x), std::erfc(std::sqrt(x))) < 1e-10);
        CHECK(rel(regularized_lower_gamma(1.0, x), -std::expm1(-x)) < 1e-10);
        // P(2, x) = 1 - (1 + x) e^-x
        long double xl = x;
        double p2 = static_cast<double>(1.0L - (1.0L + xl) * std::exp(-xl));
        CHECK(rel(regularized_lower_gamma(2.0, x), p2) < 1e-10);
        CHECK(std::fabs(regularized_lower_gamma(2.0, x) + regularized_upper_gamma(2.0, x) - 1) < 1e-14);
    }
}

TEST_CASE("regularized_lower_gamma domain") {
    CHECK_THROWS_AS(regularized_lower_gamma(0.0, 1.0), lcr::DomainError);
    CHECK_THROWS_AS(regularized_lower_gamma(1.0, -1.0), lcr::DomainError);
}

TEST_CASE("regularized_lower_gamma is monotone in x") {
    for (double a : {0.3, 1.0, 4.5, 20.0, 150.0}) {
        double prev = 0;
        for (double x = 0; x < 3 * a + 20; x += (a + 1) / 97) {
            double p = regularized_lower_gamma(a, x);
            REQUIRE(p >= prev);
            REQUIRE(p <= 1.0);
            prev = p;
        }
    }
}

TEST_CASE("bessel_j0 examples") {
    CHECK(bessel_j0(0.0) == 1.0);
    double ref = oracle::j0_series(1.0);
    CHECK(std::fabs(ref - 0.7651976866) < 1e-10);
    CHECK(std::fabs(bessel_j0(1.0) - ref) < 1e-12);
    double root = oracle::j0_root(2.0, 3.0);
    CHECK(std::fabs(root - 2.4048255577) < 1e-9);
    CHECK(std::fabs(bessel_j0(2.4048255577)) < 1e-9);
}

TEST_CASE("bessel_j0 accuracy up to 1e4") {
    for (double x = 0; x <= 20; x += 0.173) {
        CHECK_MESSAGE(std::fabs(bessel_j0(x) - oracle::j0_series(x)) < 1e-10, "x=" << x);
        CHECK(bessel_j0(-x) == bessel_j0(x));
    }
    for (double x = 20; x <= 1e4; x *= 1.09) {
        CHECK_MESSAGE(std::fabs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 1e-10, "x=" << x);
        CHECK(std::fabs(bessel_j0(x)) <= 1.0);
    }
    CHECK_THROWS_AS(bessel_j0(std::numeric_limits<double>::infinity()), lcr::DomainError);
}

TEST_CASE("bessel_j0 series truncation stays below its reported bound") {
    for (double x = 0; x <= 2.0; x += 0.05) {
        SpecFunResult r = bessel_j0_eval(x);
        CHECK(r.converged);
        CHECK(r.terms_used >= 1);
        double truth = oracle::j0_series(x);
        CHECK_MESSAGE(std::fabs(r.value - truth) <= r.error_bound + 4.5e-16, "x=" << x);
    }
}

TEST_CASE("bessel_i examples") {
    CHECK(bessel_i(0.0, 0.0) == 1.0);
    double closed = std::sqrt(2 / (oracle::kPi * 1.0)) * std::sinh(1.0);
    CHECK(std::fabs(closed - 0.9376748883) < 1e-10);
    CHECK(rel(bessel_i(0.5, 1.0), closed) < 1e-12);
    double series = oracle::bessel_i_series(0.0, 1.0);
    CHECK(std::fabs(series - 1.2660658778) < 1e-10);
    CHECK(rel(bessel_i(0.0, 1.0), series) < 1e-12);
}

TEST_CASE("bessel_i accuracy up to x = 700") {
    for (double v : {0.0, 0.25, 0.5, 1.0, 2.7, 10.0, 40.0}) {
        for (double x = 0.01; x <= 700; x *= 1.21) {
            double ref = std::cyl_bessel_i(v, x);
            if (ref == 0.0 || !std::isfinite(ref)) continue;
            CHECK_MESSAGE(rel(bessel_i(v, x), ref) < 1e-9, "v=" << v << " x=" << x);
        }
    }
}

TEST_CASE("bessel_i overflow is signalled") {
    CHECK_THROWS_AS(bessel_i(0.0, 800.0), lcr::OverflowError);
    SpecFunResult r = bessel_i_eval(0.0, 800.0);
    CHECK_FALSE(r.converged);
    CHECK(std::isinf(r.value));
    double ln = log_bessel_i(0.0, 800.0);
    CHECK(std::isfinite(ln));
    // e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    long double term = 1, sum = 1;
    for (int k = 1; k < 30; ++k) {
        term *= (2.0L * k - 1) * (2.0L * k - 1) / (k * 8.0L * 800.0L);
        sum += term;
    }
    double ref = 800.0 - 0.5 * std::log(2 * oracle::kPi * 800.0) + static_cast<double>(std::log(sum));
    CHECK(rel(ln, ref) < 1e-14);
}

TEST_CASE("bessel_i recurrence") {
    for (double v = 0.25; v <= 10.0; v += 0.35) {
        for (double x = 0.1; x <= 50.0; x *= 1.4) {
            double lhs = v >= 1 ? bessel_i(v - 1, x) : std::exp(log_bessel_i(v - 1, x));
            double diff = lhs - bessel_i(v + 1, x);
            double rhs = 2 * v / x * bessel_i(v, x);
            CHECK_MESSAGE(rel(diff, rhs) < 1e-8, "v=" << v << " x=" << x);
        }
    }
}

TEST_CASE("log_bessel_i series and asymptotic branches agree where both apply") {
    for (double v : {0.0, 0.5, 1.0, 2.5, 4.0}) {
        for (double x = 30; x <= 60; x += 2.5) {
            double asym = 0;
            REQUIRE(lcr::specfun::detail::log_bessel_i_asymptotic(v, x, asym));
            double series = lcr::specfun::detail::log_bessel_i_series(v, x);
            CHECK_MESSAGE(std::fabs(std::expm1(asym - series)) < 1e-9, "v=" << v << " x=" << x);
        }
    }
}

TEST_CASE("log_bessel_i handles fractional negative orders") {
    for (double v : {-0.9, -0.5, -0.25}) {
        for (double x : {0.01, 0.5, 3.0, 20.0}) {
            double ref = std::cyl_bessel_i(-v, x) +
                         2 / oracle::kPi * std::sin(-v * oracle::kPi) * std::cyl_bessel_k(-v, x);
            CHECK(std::fabs(log_bessel_i(v, x) - std::log(ref)) < 1e-9);
        }
    }
}

TEST_CASE("ncx2_cdf examples") {
    for (double dof : {0.7, 2.0, 5.5}) {
        for (double x : {0.0, 0.3, 1.0, 4.0, 12.0}) {
            CHECK(std::fabs(ncx2_cdf(dof, 0.0, x) - regularized_lower_gamma(dof / 2, x / 2)) < 1e-14);
        }
    }
    CHECK(ncx2_cdf(2.0, 1.0, 0.0) == 0.0);
    // With dof = 2 the CDF is 1 - Q1(sqrt(lambda), sqrt(x)).
    double ref = 1 - oracle::marcum_q1(1.0, 1.0);
    CHECK(std::fabs(ref - 0.2671202) < 1e-7);
    CHECK(std::fabs(ncx2_cdf(2.0, 1.0, 1.0) - ref) < 1e-9);
}

TEST_CASE("ncx2_cdf against Marcum Q over a grid") {
    for (double lam : {0.1, 1.0, 5.0, 30.0}) {
        for (double x : {0.05, 0.5, 2.0, 8.0, 40.0}) {
            double ref = 1 - oracle::marcum_q1(std::sqrt(lam), std::sqrt(x));
            CHECK(std::fabs(ncx2_cdf(2.0, lam, x) - ref) < 1e-9);
            CHECK(std::fabs(ncx2_cdf(2.0, lam, x) + ncx2_sf(2.0, lam, x) - 1) < 1e-13);
        }
    }
}

TEST_CASE("ncx2_cdf handles large noncentrality") {
    SpecFunResult r = ncx2_cdf_eval(3.0, 2000.0, 2003.0);
    CHECK(r.converged);
    CHECK(r.value > 0.4);
    CHECK(r.value < 0.6);
}

TEST_CASE("ncx2_cdf is monotone in x") {
    for (double dof : {0.5, 2.0, 7.3}) {
        for (double lam : {0.0, 0.7, 12.0}) {
            double prev = 0;
            for (double x = 0; x < 4 * (dof + lam) + 20; x += 0.137) {
                double p = ncx2_cdf(dof, lam, x);
                REQUIRE(p >= prev);
                REQUIRE(p <= 1.0);
                prev = p;
            }
        }
    }
}

TEST_CASE("ncx2_cdf matches sampled offset Gaussians") {
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> gauss;
    struct Case {
        int dof;
        double lambda;
    };
    for (Case c : {Case{1, 2.0}, Case{3, 0.5}, Case{4, 9.0}}) {
        std::vector<double> mu(c.dof, 0.0);
        mu[0] = std::sqrt(c.lambda);
        std::vector<double> s(1'000'000);
        for (double& v : s) {
            double acc = 0;
            for (int k = 0; k < c.dof; ++k) {
                double z = gauss(rng) + mu[k];
                acc += z * z;
            }
            v = acc;
        }
        std::sort(s.begin(), s.end());
        double d = oracle::ks_distance(s, [&](double x) { return ncx2_cdf(c.dof, c.lambda, x); }, 5);
        CHECK_MESSAGE(d < 0.005, "dof=" << c.dof << " lambda=" << c.lambda << " ks=" << d);
    }
}
