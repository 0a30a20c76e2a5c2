// SPDX-License-Identifier: Apache-2.0
//
// Closed-form level crossing rate and exceedance duration of the aggregate
// interference sum_i I_i |h_i(t)|^2.
//
// Rayleigh fading: the aggregate is approximated by a gamma process matched
// in mean and variance, and its LCR follows from the ACF curvature at zero
// lag. Rician fading: the aggregate is approximated by an alpha-scaled
// noncentral chi-square process fitted by three-moment matching.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lcr/curve.hpp"
#include "lcr/profile.hpp"

namespace lcr::analytic {

enum class Fading { rayleigh, rician };

struct MeanVariance {
    double mean = 0.0;
    double variance = 0.0;
};

struct GammaFit {
    double shape_r = 0.0;
    double rate_theta = 0.0;
};

// Y with alpha * Y ~ noncentral chi-square(dof_v, noncentrality_lambda).
struct Ncx2Fit {
    double dof_v = 0.0;
    double noncentrality_lambda = 0.0;
    double scale_alpha = 0.0;
};

// Second derivative of the aggregate ACF at zero lag, in s^-2.
struct AcfCurvature {
    double value = 0.0;
};

struct RicianMoments {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
};

// --- Rayleigh ---------------------------------------------------------------

MeanVariance rayleigh_moments(const InterfererProfile& profile);

// sum_i I_i^2 J0^2(2 pi f_i tau) / sum_i I_i^2
double acf(const InterfererProfile& profile, double tau_s);

// -4 pi^2 sum_i I_i^2 f_i^2 / sum_i I_i^2
AcfCurvature acf_curvature(const InterfererProfile& profile);

GammaFit gamma_fit(const InterfererProfile& profile);

// Up-crossing rate (per second) of the gamma process across `threshold`.
// Throws DegenerateInputError at threshold 0 when shape_r <= 0.5.
double gamma_lcr(const GammaFit& fit, const AcfCurvature& curvature, double threshold);

// Threshold that maximizes gamma_lcr: (r - 1/2) / theta, clamped at 0.
double gamma_lcr_argmax(const GammaFit& fit);

// --- Rician -----------------------------------------------------------------

// Raw moments of the Rician aggregate with shared K.
RicianMoments rician_moments(const InterfererProfile& profile);

// E(Y), E(Y^2), E(Y^3) of the alpha-scaled noncentral chi-square.
RicianMoments ncx2_moments(const Ncx2Fit& fit);

// Largest relative difference between the moments of `fit` and `target`.
double moment_residual(const Ncx2Fit& fit, const RicianMoments& target);

// Method-of-moments fit through the quadratic in alpha. Throws
// InfeasibleFitError when no root gives alpha > 0, nu > 0, lambda >= 0.
Ncx2Fit ncx2_fit_moments(const RicianMoments& m);

struct NumericFitReport {
    Ncx2Fit fit;
    double objective = 0.0;  // sum_k ((E(Y^k) - m_k) / m_k)^2
    bool converged = false;  // objective < 1e-16
    int iterations = 0;
};

// Levenberg-Marquardt minimization of the relative moment mismatch over
// (ln nu, ln lambda, ln alpha). Never throws on non-convergence; the report
// carries the best point found.
NumericFitReport ncx2_fit_numeric(const RicianMoments& m,
                                  std::optional<Ncx2Fit> initial = std::nullopt);

// Up-crossing rate (per second) of the scaled noncentral chi-square process.
// Requires lambda > 0 (use gamma_lcr for the central case); evaluated in
// log space.
double ncx2_lcr(const Ncx2Fit& fit, double doppler_hz, double threshold);

enum class FitMethod { closed_form, numeric, equivalent_branches };

struct RicianFit {
    Ncx2Fit fit;
    FitMethod method = FitMethod::closed_form;
    double moment_residual = 0.0;
};

// Fitting pipeline used by the Rician model; see the implementation notes.
// With `allow_equivalent_branches` false, a profile that neither the closed
// form nor the numeric fit can match throws InfeasibleFitError.
RicianFit fit_rician(const InterfererProfile& profile, bool allow_equivalent_branches = true);

// --- Unified model ----------------------------------------------------------

// Fitted distribution of the aggregate for one fading kind. Rayleigh uses
// the per-interferer Dopplers in the ACF curvature; Rician requires a common
// Doppler (MixedDopplerError otherwise).
class AggregateModel {
public:
    AggregateModel(const InterfererProfile& profile, Fading fading,
                   bool allow_equivalent_branches = true);

    Fading fading() const { return fading_; }
    double mean() const { return mean_; }
    double mean_square() const { return mean_square_; }
    double rms() const;

    double lcr(double threshold) const;
    double cdf(double threshold) const;
    double sf(double threshold) const;
    // (1 - F(T)) / LCR(T); throws UndefinedAedError where LCR(T) == 0.
    double aed(double threshold) const;

    const GammaFit& gamma() const { return gamma_; }
    const std::optional<RicianFit>& rician() const { return rician_; }

private:
    Fading fading_;
    double mean_ = 0.0;
    double mean_square_ = 0.0;
    double doppler_hz_ = 0.0;  // common Doppler; 0 if mixed
    GammaFit gamma_;
    AcfCurvature curvature_;
    std::optional<RicianFit> rician_;
};

double aggregate_cdf(const InterfererProfile& profile, Fading fading, double threshold);

// AED with every interferer at `doppler_hz`.
double aed(const InterfererProfile& profile, Fading fading, double doppler_hz,
           double threshold);

// kappa = T / sqrt(m2) of an absolute threshold for this fading kind.
double threshold_kappa(const InterfererProfile& profile, Fading fading, double threshold);

// Analytic columns of the normalized curve. Throws MixedDopplerError unless
// every interferer shares one Doppler.
LcrCurve lcr_curve(const InterfererProfile& profile, Fading fading,
                   std::span<const double> kappa_grid, bool allow_equivalent_branches = true);

}  // namespace lcr::analytic
