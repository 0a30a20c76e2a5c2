// SPDX-License-Identifier: Apache-2.0

#include "lcr/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lcr/error.hpp"
#include "rng.hpp"

namespace lcr::scenario {

void ScenarioParams::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(region_radius_m) || !finite(cr_radius_m) || !(cr_radius_m > 0.0) ||
        !(region_radius_m > cr_radius_m)) {
        throw InvalidArgument("scenario: need region_radius_m > cr_radius_m > 0");
    }
    if (!finite(density_per_km2) || density_per_km2 < 0.0) {
        throw InvalidArgument("scenario: density_per_km2 must be >= 0");
    }
    if (!(activity_factor > 0.0) || activity_factor > 1.0) {
        throw InvalidArgument("scenario: activity_factor must be in (0, 1]");
    }
    if (!finite(shadow_sigma_db) || shadow_sigma_db < 0.0) {
        throw InvalidArgument("scenario: shadow_sigma_db must be >= 0");
    }
    if (!finite(pathloss_exponent) || !(pathloss_exponent > 2.0)) {
        throw InvalidArgument("scenario: pathloss_exponent must be > 2");
    }
    if (!finite(snr_penalty_db) || snr_penalty_db < 0.0) {
        throw InvalidArgument("scenario: snr_penalty_db must be >= 0");
    }
    if (!finite(noise_power) || !(noise_power > 0.0)) {
        throw InvalidArgument("scenario: noise_power must be > 0");
    }
    if (power_norm && (!finite(*power_norm) || !(*power_norm > 0.0))) {
        throw InvalidArgument("scenario: power_norm must be > 0");
    }
}

double ScenarioParams::effective_power_norm() const {
    return power_norm ? *power_norm : std::pow(10.0, pathloss_exponent * std::log10(cr_radius_m));
}

double ScenarioParams::expected_count() const {
    const double r_km = region_radius_m / 1000.0;
    return std::numbers::pi * r_km * r_km * density_per_km2 * activity_factor;
}

double snr_penalty_threshold(double penalty_db, double noise_power) {
    if (!std::isfinite(penalty_db) || penalty_db < 0.0) {
        throw DomainError("snr_penalty_threshold: penalty must be >= 0 dB");
    }
    if (!std::isfinite(noise_power) || !(noise_power > 0.0)) {
        throw DomainError("snr_penalty_threshold: noise power must be > 0");
    }
    return noise_power * std::expm1(penalty_db / 10.0 * std::numbers::ln10);
}

std::vector<CandidateCR> generate_candidates(const ScenarioParams& params) {
    params.validate();
    std::vector<CandidateCR> out;
    const double mean = params.expected_count();
    if (mean <= 0.0) {
        return out;
    }
    auto eng = detail::make_engine(params.seed, detail::RngDomain::scenario);
    std::poisson_distribution<std::uint64_t> count_dist(mean);
    std::normal_distribution<double> shadow(0.0, 1.0);
    const std::uint64_t n = count_dist(eng);
    out.reserve(n);

    const double r2_min = params.cr_radius_m * params.cr_radius_m;
    const double r2_max = params.region_radius_m * params.region_radius_m;
    const double norm = params.effective_power_norm();
    for (std::uint64_t i = 0; i < n; ++i) {
        CandidateCR c;
        // Uniform in the annulus: r^2 uniform. The bearing is irrelevant to
        // the power at the centre and is not drawn.
        c.distance_m = std::sqrt(r2_min + (r2_max - r2_min) * detail::uniform01(eng));
        c.shadowing_db = params.shadow_sigma_db * shadow(eng);
        c.long_term_power = std::pow(c.distance_m, -params.pathloss_exponent) *
                            std::pow(10.0, c.shadowing_db / 10.0) * norm;
        out.push_back(c);
    }
    return out;
}

std::vector<std::size_t> decentralized_select(std::span<const double> powers,
                                              double threshold) {
    if (!(threshold > 0.0)) {
        throw InvalidArgument("decentralized_select: threshold must be > 0");
    }
    std::vector<std::size_t> admitted;
    double sum = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (sum + powers[i] < threshold) {
            sum += powers[i];
            admitted.push_back(i);
        }
    }
    return admitted;
}

std::vector<std::size_t> decentralized_select(std::span<const CandidateCR> candidates,
                                              double threshold) {
    std::vector<double> powers;
    powers.reserve(candidates.size());
    for (const auto& c : candidates) powers.push_back(c.long_term_power);
    return decentralized_select(std::span<const double>(powers), threshold);
}

InterfererProfile admitted_profile(std::span<const CandidateCR> candidates,
                                   std::span<const std::size_t> admitted,
                                   double doppler_hz, double k_linear) {
    InterfererProfile p;
    p.rician_k_linear = k_linear;
    for (std::size_t idx : admitted) {
        p.powers.push_back(candidates[idx].long_term_power);
        p.doppler_hz.push_back(doppler_hz);
    }
    return p;
}

Fixture parse_fixture(std::string_view name) {
    if (name == "dominant") return Fixture::dominant;
    if (name == "no_dominant") return Fixture::no_dominant;
    throw InvalidArgument("unknown fixture '" + std::string(name) +
                          "' (expected dominant or no_dominant)");
}

std::string_view fixture_name(Fixture fixture) {
    return fixture == Fixture::dominant ? "dominant" : "no_dominant";
}

InterfererProfile fixture_profile(Fixture fixture, double doppler_hz, double k_linear) {
    if (!(doppler_hz > 0.0) || !std::isfinite(doppler_hz)) {
        throw InvalidArgument("fixture_profile: doppler_hz must be > 0");
    }
    std::vector<double> shares;
    if (fixture == Fixture::dominant) {
        shares = {0.95, 0.03, 0.02};
    } else {
        shares.assign(18, 0.84 / 17.0);
        shares[0] = 0.16;
    }
    const double total = snr_penalty_threshold(2.0, 1.0);
    InterfererProfile p;
    p.rician_k_linear = k_linear;
    for (double s : shares) {
        p.powers.push_back(s * total);
        p.doppler_hz.push_back(doppler_hz);
    }
    p.validate();
    return p;
}

}  // namespace lcr::scenario
