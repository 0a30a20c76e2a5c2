// SPDX-License-Identifier: Apache-2.0
//
// Random CR deployments around a primary receiver and the decentralized
// (arrival-order, greedy) admission rule that turns them into interferer
// profiles. Also provides the two reference profiles: one dominant
// interferer, and many comparable ones.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lcr/profile.hpp"

namespace lcr::scenario {

struct ScenarioParams {
    double region_radius_m = 1000.0;  // PU coverage radius R
    double cr_radius_m = 100.0;       // R_c; also the minimum CR distance
    double density_per_km2 = 1000.0;
    double activity_factor = 0.1;
    double shadow_sigma_db = 8.0;
    double pathloss_exponent = 3.5;
    double snr_penalty_db = 2.0;
    double noise_power = 1.0;
    std::uint64_t seed = 1;
    // Transmit-power scale. Defaults to R_c^gamma, so a CR at distance R_c
    // with no shadowing contributes unit (noise-normalized) power.
    std::optional<double> power_norm;

    void validate() const;
    double effective_power_norm() const;
    double expected_count() const;
};

struct CandidateCR {
    double distance_m = 0.0;
    double shadowing_db = 0.0;
    double long_term_power = 0.0;
};

// Interference budget for an SNR loss of `penalty_db`:
// S/(N+I) = S/N - penalty  =>  I = N (10^(penalty/10) - 1).
double snr_penalty_threshold(double penalty_db, double noise_power);

// Poisson number of CRs placed uniformly in the annulus R_c < d < R around
// the PU, with log-normal shadowing. Deterministic in params.seed.
std::vector<CandidateCR> generate_candidates(const ScenarioParams& params);

// Greedy pass in arrival order: candidate i is admitted iff the running
// admitted sum plus its power stays strictly below `threshold`. Returns the
// admitted indices in arrival order.
std::vector<std::size_t> decentralized_select(std::span<const CandidateCR> candidates,
                                              double threshold);
std::vector<std::size_t> decentralized_select(std::span<const double> powers,
                                              double threshold);

InterfererProfile admitted_profile(std::span<const CandidateCR> candidates,
                                   std::span<const std::size_t> admitted,
                                   double doppler_hz, double k_linear);

enum class Fixture { dominant, no_dominant };

Fixture parse_fixture(std::string_view name);
std::string_view fixture_name(Fixture fixture);

// dominant:    3 interferers, shares {0.95, 0.03, 0.02}
// no_dominant: 18 interferers, shares {0.16, 17 x 0.84/17}
// Both total snr_penalty_threshold(2 dB, 1).
InterfererProfile fixture_profile(Fixture fixture, double doppler_hz, double k_linear);

}  // namespace lcr::scenario
