// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. `run` is the whole program minus process setup, so
// tests can drive it in-process.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcr/analytic.hpp"
#include "lcr/mcsim.hpp"
#include "lcr/scenario.hpp"

namespace lcr::cli {

enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kInvalidConfig = 2,
    kFitFailure = 3,
    kEmptyScenario = 4,
    kComparisonFailed = 5,
};

// Simulation defaults with one worker per hardware thread.
mcsim::FadingSimConfig default_sim();

// Exactly one profile source is set after resolution.
struct RunConfig {
    std::optional<scenario::ScenarioParams> scenario;
    std::optional<std::filesystem::path> profile_path;
    std::optional<scenario::Fixture> fixture;

    std::optional<analytic::Fading> fading;
    std::optional<double> k_db;
    std::optional<double> doppler_hz;
    std::optional<double> kappa_min;
    std::optional<double> kappa_max;
    int grid_points = 60;
    double snr_penalty_db = 2.0;  // budget used when no scenario is given
    bool fit_fallback = true;
    mcsim::FadingSimConfig sim = default_sim();
    std::optional<std::filesystem::path> output_path;

    // compare only: simulate at this Doppler instead of the analytic one
    std::optional<double> sim_doppler_hz;
};

// Parses the JSON config file format. Unknown keys are rejected.
RunConfig parse_config(std::string_view json_text);

// Checks the RunConfig invariants; throws lcr::InvalidArgument.
void validate(const RunConfig& config);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lcr::cli
