// SPDX-License-Identifier: Apache-2.0
//
// Level-crossing curves over a normalized threshold grid, and their CSV form.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lcr {

struct CurvePoint {
    double kappa = 0.0;      // threshold / rms of the aggregate
    double threshold = 0.0;  // absolute threshold
    std::optional<double> lcr_norm_analytic;  // LCR / f_D
    std::optional<double> aed_norm_analytic;  // AED * f_D
    std::optional<double> cdf_analytic;
    std::optional<double> lcr_norm_emp;
    std::optional<double> aed_norm_emp;
    std::optional<double> cdf_emp;
    std::optional<std::uint64_t> crossings;
    std::optional<std::uint64_t> sojourns;  // completed excursions (not in CSV)
    bool is_threshold = false;
};

struct LcrCurve {
    double doppler_hz = 0.0;
    double rms = 0.0;  // sqrt(m2)
    std::vector<CurvePoint> points;
};

inline constexpr const char* kCurveCsvHeader =
    "kappa,threshold,lcr_norm_analytic,aed_norm_analytic,cdf_analytic,"
    "lcr_norm_emp,aed_norm_emp,cdf_emp,crossings,is_threshold";

std::vector<double> log_spaced_grid(double lo, double hi, int points);

// 60 log-spaced points over [0.05, 3] x threshold_kappa.
std::vector<double> default_kappa_grid(double threshold_kappa);

// Flags the grid point closest (in log kappa) to `threshold_kappa`.
void mark_threshold(LcrCurve& curve, double threshold_kappa);

// Shortest round-trip decimal form; locale independent.
std::string format_number(double value);

// Header line plus one row per point, '\n' line endings, empty cells for
// missing values.
void write_curve_csv(std::ostream& out, const LcrCurve& curve);

}  // namespace lcr
