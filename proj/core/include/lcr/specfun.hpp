// SPDX-License-Identifier: Apache-2.0
//
// Real-valued special functions used by the analytic LCR formulas.
//
// Every function is pure and reentrant. The plain `double` entry points throw
// lcr::DomainError / lcr::ConvergenceError / lcr::OverflowError; the `_eval`
// variants expose convergence details instead of throwing on non-convergence.

#pragma once

namespace lcr::specfun {

struct SpecFunResult {
    double value = 0.0;
    bool converged = false;
    int terms_used = 1;
    // Bound on the absolute truncation error of the last summation, when the
    // algorithm provides one (alternating series). Zero otherwise.
    double error_bound = 0.0;
};

/// ln Gamma(x) for x > 0 (Lanczos approximation, g = 671/128, 14 terms).
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(a, x).
double regularized_lower_gamma(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
double regularized_upper_gamma(double a, double x);
SpecFunResult regularized_lower_gamma_eval(double a, double x);

/// Bessel function of the first kind, order zero.
double bessel_j0(double x);
SpecFunResult bessel_j0_eval(double x);

/// Modified Bessel function of the first kind I_order(x), order >= 0 real.
double bessel_i(double order, double x);
/// ln I_order(x) for order > -1; no overflow for large x.
double log_bessel_i(double order, double x);
/// Returns converged == false with value = +inf when I_order(x) overflows.
SpecFunResult bessel_i_eval(double order, double x);

/// CDF of the noncentral chi-square distribution (fractional dof allowed).
double ncx2_cdf(double dof, double noncentrality, double x);
/// Survival function 1 - ncx2_cdf, summed directly from upper-tail terms.
double ncx2_sf(double dof, double noncentrality, double x);
SpecFunResult ncx2_cdf_eval(double dof, double noncentrality, double x);

}  // namespace lcr::specfun
