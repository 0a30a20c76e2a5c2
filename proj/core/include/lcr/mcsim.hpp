// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo engine: sum-of-sinusoids Jakes fading, aggregate interference
// traces and empirical crossing statistics.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "lcr/analytic.hpp"
#include "lcr/curve.hpp"
#include "lcr/profile.hpp"

namespace lcr::mcsim {

struct FadingSimConfig {
    double duration_s = 300.0;
    int oversample = 64;   // samples per Doppler period
    int oscillators = 32;  // sinusoids per quadrature
    std::uint64_t seed = 1;
    unsigned workers = 1;  // does not affect results

    void validate() const;
    double sample_rate(double doppler_hz) const { return oversample * doppler_hz; }
    std::size_t sample_count(double doppler_hz) const;
};

// One realization of a unit-power Jakes fading gain
//   h(t) = sqrt(1/(K+1)) s(t) + sqrt(K/(K+1)) e^{j phi0}
// where s(t) is a normalized sum of complex sinusoids with jittered
// stratified arrival angles and uniform phases. The LOS phasor is static.
class FadingProcess {
public:
    FadingProcess(double k_linear, double doppler_hz, int oscillators,
                  std::uint64_t seed, std::uint64_t stream_id);

    std::complex<double> at(double t) const;

    // out[n] = h((first + n) / sample_rate)
    void fill(std::size_t first, double sample_rate,
              std::span<std::complex<double>> out) const;

private:
    std::vector<double> omega_;  // rad/s
    std::vector<double> phase_;
    double scatter_gain_ = 1.0;
    std::complex<double> los_;
};

std::vector<std::complex<double>> gen_fading(double k_linear, double doppler_hz,
                                             const FadingSimConfig& config,
                                             std::uint64_t stream_id);

struct InterferenceTrace {
    double sample_rate_hz = 0.0;
    std::vector<double> samples;

    double duration() const { return samples.size() / sample_rate_hz; }
};

// samples[n] = sum_i I_i |h_i(n / fs)|^2 with stream_id = i and fs set by the
// largest Doppler in the profile. Bit-identical for any worker count.
InterferenceTrace aggregate_trace(const InterfererProfile& profile,
                                  const FadingSimConfig& config);

struct CrossingStats {
    std::uint64_t up_crossings = 0;
    std::vector<double> sojourn_durations_s;  // completed excursions above T
    double total_time_s = 0.0;
    double fraction_above = 0.0;

    double mean_sojourn() const;
};

CrossingStats count_crossings(const InterferenceTrace& trace, double threshold);

// Empirical columns (and raw crossing counts) of the normalized curve.
// Thresholds are kappa * sqrt(m2) with m2 from the analytic model.
LcrCurve empirical_curve(const InterfererProfile& profile, analytic::Fading fading,
                         std::span<const double> kappa_grid,
                         const FadingSimConfig& config);

// Fills the empirical fields of an existing curve from `trace`.
void fill_empirical(LcrCurve& curve, const InterferenceTrace& trace);

struct ConditionalVarianceFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double mean_level = 0.0;
    std::vector<double> bin_level;
    std::vector<double> bin_variance;
};

// Regresses the within-bin variance of the finite-difference derivative on
// the bin level. Requires >= 1e5 samples (InsufficientSamplesError) and a
// trace whose relative spread exceeds 1e-4 (DegenerateInputError).
ConditionalVarianceFit conditional_variance_check(const InterferenceTrace& trace,
                                                  int num_bins);

// Independent draws of the aggregate (no time correlation), Rayleigh when
// fading == rayleigh regardless of the profile K.
std::vector<double> sample_aggregate(const InterfererProfile& profile,
                                     analytic::Fading fading, std::size_t count,
                                     std::uint64_t seed);

// sup |F_emp - F| over the sorted samples. With stride > 1 the CDF is only
// evaluated at every stride-th sample (the result is then a lower bound
// accurate to about stride / n).
double kolmogorov_distance(std::span<const double> sorted_samples,
                           const std::function<double(double)>& cdf,
                           std::size_t stride = 1);

// Debug dump, "time_s,power" per line. Not a stable format.
void write_trace_csv(std::ostream& out, const InterferenceTrace& trace);

}  // namespace lcr::mcsim
