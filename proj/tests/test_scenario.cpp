// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "lcr/error.hpp"
#include "lcr/scenario.hpp"
#include "support/oracles.hpp"

using namespace lcr;
using namespace lcr::scenario;

TEST_CASE("snr_penalty_threshold examples") {
    CHECK(snr_penalty_threshold(0.0, 1.0) == 0.0);
    CHECK(std::fabs(snr_penalty_threshold(2.0, 1.0) - (std::pow(10.0, 0.2) - 1)) < 1e-15);
    CHECK(std::fabs(snr_penalty_threshold(2.0, 1.0) - 0.5849) < 1e-4);
    CHECK(std::fabs(snr_penalty_threshold(3.0103, 2.0) - 2.0) < 1e-4);
    CHECK_THROWS_AS(snr_penalty_threshold(-0.1, 1.0), DomainError);
}

TEST_CASE("snr_penalty_threshold is strictly increasing") {
    double prev = -1;
    for (double db = 0; db < 20; db += 0.01) {
        double t = snr_penalty_threshold(db, 1.0);
        REQUIRE(t > prev);
        prev = t;
    }
}

TEST_CASE("generate_candidates with zero density is empty") {
    ScenarioParams p;
    p.density_per_km2 = 0;
    CHECK(generate_candidates(p).empty());
}

TEST_CASE("generate_candidates is deterministic in the seed") {
    ScenarioParams p;
    p.seed = 99;
    auto a = generate_candidates(p);
    auto b = generate_candidates(p);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].distance_m == b[i].distance_m);
        CHECK(a[i].shadowing_db == b[i].shadowing_db);
        CHECK(a[i].long_term_power == b[i].long_term_power);
    }
    p.seed = 100;
    auto c = generate_candidates(p);
    CHECK((c.size() != a.size() || c[0].distance_m != a[0].distance_m));
}

TEST_CASE("generate_candidates mean count") {
    ScenarioParams p;
    double total = 0;
    for (std::uint64_t s = 1; s <= 1000; ++s) {
        p.seed = s;
        total += static_cast<double>(generate_candidates(p).size());
    }
    double mean = total / 1000;
    CHECK(oracle::rel(mean, 100 * oracle::kPi) < 0.03);
}

TEST_CASE("generate_candidates geometry, shadowing and power law") {
    ScenarioParams p;
    p.density_per_km2 = 1e5 / (oracle::kPi * p.activity_factor);
    p.seed = 7;
    auto c = generate_candidates(p);
    REQUIRE(c.size() > 90000);
    double n = static_cast<double>(c.size());
    double mean_db = 0, mean_r2 = 0;
    for (const auto& x : c) {
        CHECK(x.distance_m > p.cr_radius_m);
        CHECK(x.distance_m < p.region_radius_m);
        double expect = std::pow(x.distance_m, -p.pathloss_exponent) *
                        std::pow(10.0, x.shadowing_db / 10) * std::pow(p.cr_radius_m, p.pathloss_exponent);
        REQUIRE(oracle::rel(x.long_term_power, expect) < 1e-12);
        mean_db += x.shadowing_db;
        mean_r2 += x.distance_m * x.distance_m;
    }
    mean_db /= n;
    mean_r2 /= n;
    double var = 0;
    for (const auto& x : c) var += (x.shadowing_db - mean_db) * (x.shadowing_db - mean_db);
    double sd = std::sqrt(var / (n - 1));
    CHECK(std::fabs(mean_db) < 0.1);
    CHECK(std::fabs(sd / p.shadow_sigma_db - 1) < 0.02);
    // r^2 uniform on [R_c^2, R^2]
    double expect_r2 = 0.5 * (p.cr_radius_m * p.cr_radius_m + p.region_radius_m * p.region_radius_m);
    CHECK(oracle::rel(mean_r2, expect_r2) < 0.01);
}

TEST_CASE("unit-power reference at the CR radius") {
    ScenarioParams p;
    CHECK(oracle::rel(p.effective_power_norm() * std::pow(p.cr_radius_m, -p.pathloss_exponent), 1.0) < 1e-12);
}

TEST_CASE("scenario parameter validation") {
    ScenarioParams p;
    p.cr_radius_m = 2000;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.activity_factor = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.pathloss_exponent = 2;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.shadow_sigma_db = -1;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("decentralized_select examples") {
    std::vector<double> powers{0.5, 0.6, 0.3};
    CHECK(decentralized_select(std::span<const double>(powers), 1.0) == std::vector<std::size_t>{0, 2});
    std::vector<double> none;
    CHECK(decentralized_select(std::span<const double>(none), 1.0).empty());
    std::vector<double> big{1.0, 2.0, 1.5};
    CHECK(decentralized_select(std::span<const double>(big), 1.0).empty());
    std::vector<double> exact{0.4, 0.6};
    CHECK(decentralized_select(std::span<const double>(exact), 1.0) == std::vector<std::size_t>{0});
}

namespace {

std::vector<double> random_powers(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> e(3.0);
    std::vector<double> v(n);
    for (double& x : v) x = e(rng);
    return v;
}

double admitted_sum(const std::vector<double>& p, const std::vector<std::size_t>& idx) {
    double s = 0;
    for (auto i : idx) s += p[i];
    return s;
}

}  // namespace

TEST_CASE("decentralized_select properties") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> thr(0.05, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
        auto p = random_powers(rng, 1 + trial % 40);
        double t = thr(rng);
        auto acc = decentralized_select(std::span<const double>(p), t);
        // Admission safety.
        CHECK(admitted_sum(p, acc) < t);
        // Prefix property: drop one rejected candidate.
        std::vector<std::size_t> rejected;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!std::binary_search(acc.begin(), acc.end(), i)) rejected.push_back(i);
        }
        if (!rejected.empty()) {
            std::size_t drop = rejected[trial % rejected.size()];
            std::vector<double> q;
            std::vector<std::size_t> map;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (i == drop) continue;
                q.push_back(p[i]);
                map.push_back(i);
            }
            auto acc2 = decentralized_select(std::span<const double>(q), t);
            std::vector<std::size_t> before, before2;
            for (auto i : acc) if (i < drop) before.push_back(i);
            for (auto j : acc2) if (map[j] < drop) before2.push_back(map[j]);
            CHECK(before == before2);
        }
        // With a larger budget the first differing decision is an admission.
        auto acc_big = decentralized_select(std::span<const double>(p), t * 1.5);
        std::vector<bool> in(p.size()), in_big(p.size());
        for (auto i : acc) in[i] = true;
        for (auto i : acc_big) in_big[i] = true;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (in[i] != in_big[i]) {
                CHECK(in_big[i]);
                break;
            }
        }
    }
}

TEST_CASE("a larger budget can displace a later admission") {
    std::vector<double> powers{0.5, 0.6, 0.3};
    CHECK(decentralized_select(std::span<const double>(powers), 1.0) == std::vector<std::size_t>{0, 2});
    CHECK(decentralized_select(std::span<const double>(powers), 1.2) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("candidate and power overloads agree") {
    ScenarioParams p;
    p.seed = 3;
    auto c = generate_candidates(p);
    std::vector<double> powers;
    for (const auto& x : c) powers.push_back(x.long_term_power);
    double t = snr_penalty_threshold(2.0, 1.0);
    auto a = decentralized_select(std::span<const CandidateCR>(c), t);
    CHECK(a == decentralized_select(std::span<const double>(powers), t));
    auto prof = admitted_profile(c, a, 25.0, 0.0);
    CHECK(prof.size() == a.size());
    CHECK(prof.total_power() < t);
}

TEST_CASE("fixture profiles") {
    double total = snr_penalty_threshold(2.0, 1.0);
    auto d = fixture_profile(Fixture::dominant, 25.0, 0.0);
    CHECK(d.size() == 3);
    CHECK(std::fabs(d.largest_share() - 0.95) < 1e-12);
    CHECK(oracle::rel(d.total_power(), total) < 1e-12);
    auto n = fixture_profile(Fixture::no_dominant, 25.0, 10.0);
    CHECK(n.size() == 18);
    CHECK(std::fabs(n.largest_share() - 0.16) < 1e-12);
    CHECK(oracle::rel(n.total_power(), total) < 1e-12);
    CHECK(n.rician_k_linear == 10.0);
    CHECK(n.common_doppler() == 25.0);
    CHECK(parse_fixture("dominant") == Fixture::dominant);
    CHECK(parse_fixture(fixture_name(Fixture::no_dominant)) == Fixture::no_dominant);
    CHECK_THROWS_AS(parse_fixture("neither"), InvalidArgument);
}
