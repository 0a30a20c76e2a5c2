// SPDX-License-Identifier: Apache-2.0

#include "lcr/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lcr/error.hpp"
#include "lcr/specfun.hpp"

namespace lcr::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

struct PowerSums {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
};

PowerSums power_sums(const InterfererProfile& profile) {
    profile.validate();
    PowerSums s;
    for (double p : profile.powers) {
        s.s1 += p;
        s.s2 += p * p;
        s.s3 += p * p * p;
    }
    return s;
}

void require_threshold(double threshold) {
    if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
        throw DomainError("threshold must be finite and >= 0");
    }
}

void require_moments(const RicianMoments& m) {
    if (!std::isfinite(m.m1) || !std::isfinite(m.m2) || !std::isfinite(m.m3) ||
        !(m.m1 > 0.0) || !(m.m2 > 0.0) || !(m.m3 > 0.0)) {
        throw InvalidArgument("moments must be finite and positive");
    }
}

// Forward moments in extended precision, used to rank quadratic roots.
std::array<long double, 3> forward_moments_ld(long double nu, long double lambda,
                                              long double alpha) {
    const long double s = nu + lambda;
    const long double x1 = s;
    const long double x2 = s * s + 2 * s + 2 * lambda;
    const long double x3 = s * s * s + 6 * s * s + 6 * lambda * s + 8 * s + 16 * lambda;
    return {x1 / alpha, x2 / (alpha * alpha), x3 / (alpha * alpha * alpha)};
}

long double residual_ld(const Ncx2Fit& f, const RicianMoments& m) {
    const auto e = forward_moments_ld(f.dof_v, f.noncentrality_lambda, f.scale_alpha);
    const std::array<long double, 3> t = {m.m1, m.m2, m.m3};
    long double worst = 0;
    for (int k = 0; k < 3; ++k) {
        worst = std::max(worst, std::fabs(e[k] / t[k] - 1));
    }
    return worst;
}

// --- Levenberg-Marquardt on the relative moment residuals ---------------------

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

constexpr double kMinLogLambda = -80.0;

Ncx2Fit from_log(const Vec3& p) {
    return {std::exp(p[0]), std::exp(p[1]), std::exp(p[2])};
}

Vec3 residuals(const Vec3& p, const RicianMoments& m) {
    const RicianMoments e = ncx2_moments(from_log(p));
    return {e.m1 / m.m1 - 1.0, e.m2 / m.m2 - 1.0, e.m3 / m.m3 - 1.0};
}

double objective(const Vec3& r) {
    return r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
}

// d r_k / d (ln nu, ln lambda, ln alpha)
Mat3 jacobian(const Vec3& p, const RicianMoments& m) {
    const double nu = std::exp(p[0]);
    const double lam = std::exp(p[1]);
    const double alpha = std::exp(p[2]);
    const double s = nu + lam;
    const double x[3] = {s, s * s + 2 * s + 2 * lam,
                         s * s * s + 6 * s * s + 6 * lam * s + 8 * s + 16 * lam};
    const double dnu[3] = {1.0, 2 * s + 2, 3 * s * s + 12 * s + 6 * lam + 8};
    const double dlam[3] = {1.0, 2 * s + 4, 3 * s * s + 12 * s + 6 * s + 6 * lam + 24};
    const double target[3] = {m.m1, m.m2, m.m3};
    Mat3 j{};
    double scale = 1.0;
    for (int k = 0; k < 3; ++k) {
        scale /= alpha;
        const double inv = scale / target[k];
        j[k][0] = nu * dnu[k] * inv;
        j[k][1] = lam * dlam[k] * inv;
        j[k][2] = -(k + 1) * x[k] * inv;
    }
    return j;
}

bool solve3(Mat3 a, Vec3 b, Vec3& x) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) < 1e-300) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double v = b[r];
        for (int c = r + 1; c < 3; ++c) v -= a[r][c] * x[c];
        x[r] = v / a[r][r];
    }
    return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

struct LmResult {
    Vec3 p;
    double f;
    int iterations;
};

LmResult levenberg_marquardt(Vec3 p, const RicianMoments& m) {
    Vec3 r = residuals(p, m);
    double f = objective(r);
    double damping = 1e-3;
    int it = 0;
    for (; it < 2000 && f > 1e-32; ++it) {
        const Mat3 j = jacobian(p, m);
        Mat3 h{};
        Vec3 g{};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                for (int k = 0; k < 3; ++k) h[a][b] += j[k][a] * j[k][b];
            }
            for (int k = 0; k < 3; ++k) g[a] -= j[k][a] * r[k];
        }
        bool improved = false;
        while (damping < 1e20) {
            Mat3 hd = h;
            for (int a = 0; a < 3; ++a) hd[a][a] += damping * (h[a][a] + 1e-12);
            Vec3 step{};
            if (solve3(hd, g, step)) {
                Vec3 trial = p;
                for (int a = 0; a < 3; ++a) {
                    trial[a] += std::clamp(step[a], -5.0, 5.0);
                }
                trial[1] = std::max(trial[1], kMinLogLambda);
                const Vec3 rt = residuals(trial, m);
                const double ft = objective(rt);
                if (std::isfinite(ft) && ft < f) {
                    const double gain = f - ft;
                    p = trial;
                    r = rt;
                    f = ft;
                    damping = std::max(damping / 3.0, 1e-15);
                    improved = true;
                    if (gain < 1e-18 * f) damping = 1e20;  // stalled
                    break;
                }
            }
            damping *= 4.0;
        }
        if (!improved || damping >= 1e20) break;
    }
    return {p, f, it};
}

}  // namespace

// --- Rayleigh -----------------------------------------------------------------

MeanVariance rayleigh_moments(const InterfererProfile& profile) {
    const PowerSums s = power_sums(profile);
    return {s.s1, s.s2};
}

double acf(const InterfererProfile& profile, double tau_s) {
    profile.validate();
    if (!(tau_s >= 0.0) || !std::isfinite(tau_s)) {
        throw DomainError("acf: lag must be finite and >= 0");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double w = profile.powers[i] * profile.powers[i];
        const double j0 = specfun::bessel_j0(2.0 * kPi * profile.doppler_hz[i] * tau_s);
        num += w * j0 * j0;
        den += w;
    }
    return num / den;
}

AcfCurvature acf_curvature(const InterfererProfile& profile) {
    profile.validate();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double w = profile.powers[i] * profile.powers[i];
        num += w * profile.doppler_hz[i] * profile.doppler_hz[i];
        den += w;
    }
    return {-4.0 * kPi * kPi * num / den};
}

GammaFit gamma_fit(const InterfererProfile& profile) {
    const PowerSums s = power_sums(profile);
    return {s.s1 * s.s1 / s.s2, s.s1 / s.s2};
}

double gamma_lcr(const GammaFit& fit, const AcfCurvature& curvature, double threshold) {
    require_threshold(threshold);
    if (!(fit.shape_r > 0.0) || !(fit.rate_theta > 0.0)) {
        throw InvalidArgument("gamma_lcr: shape and rate must be positive");
    }
    if (threshold == 0.0) {
        if (fit.shape_r <= 0.5) {
            throw DegenerateInputError("gamma_lcr: rate diverges at T = 0 for r <= 0.5");
        }
        return 0.0;
    }
    const double x = fit.rate_theta * threshold;
    const double log_lcr = -std::log(2.0) - specfun::ln_gamma(fit.shape_r) +
                           0.5 * std::log(2.0 * std::abs(curvature.value) / kPi) +
                           (fit.shape_r - 0.5) * std::log(x) - x;
    return std::exp(log_lcr);
}

double gamma_lcr_argmax(const GammaFit& fit) {
    return std::max(0.0, (fit.shape_r - 0.5) / fit.rate_theta);
}

// --- Rician -------------------------------------------------------------------

RicianMoments rician_moments(const InterfererProfile& profile) {
    const PowerSums s = power_sums(profile);
    const double k = profile.rician_k_linear;
    const double q = k / (k + 1.0);
    const double q2 = q * q;
    // Per-interferer variance I^2 (1 - q^2); third central moment
    // I^3 (2 + 6K)/(K+1)^3. Written as raw moments of the sum:
    //   m3 = S1^3 + 3 (1-q^2) sum_{i!=k} I_i^2 I_k + (E|h|^6 - 1) S3
    // with E|h|^6 - 1 = 5 - 9 q^2 + 4 q^3.
    const double cross = s.s1 * s.s2 - s.s3;
    RicianMoments m;
    m.m1 = s.s1;
    m.m2 = s.s1 * s.s1 + s.s2 * (1.0 - q2);
    m.m3 = s.s1 * s.s1 * s.s1 + 3.0 * cross * (1.0 - q2) + s.s3 * (5.0 - 9.0 * q2 + 4.0 * q2 * q);
    return m;
}

RicianMoments ncx2_moments(const Ncx2Fit& fit) {
    const double nu = fit.dof_v;
    const double lam = fit.noncentrality_lambda;
    const double a = fit.scale_alpha;
    const double s = nu + lam;
    return {s / a, (s * s + 2 * s + 2 * lam) / (a * a),
            (s * s * s + 6 * s * s + 6 * lam * s + 8 * s + 16 * lam) / (a * a * a)};
}

double moment_residual(const Ncx2Fit& fit, const RicianMoments& target) {
    const RicianMoments e = ncx2_moments(fit);
    return std::max({std::abs(e.m1 / target.m1 - 1.0), std::abs(e.m2 / target.m2 - 1.0),
                     std::abs(e.m3 / target.m3 - 1.0)});
}

Ncx2Fit ncx2_fit_moments(const RicianMoments& m) {
    require_moments(m);
    const double m1 = m.m1;
    const double m2 = m.m2;
    const double m3 = m.m3;
    // E(Y) = m1 and E(Y^2) = m2 give lambda and nu in terms of alpha;
    // E(Y^3) = m3 then leaves a*alpha^2 + b*alpha + c = 0.
    const double a = 3.0 * m1 * m2 - 2.0 * m1 * m1 * m1 - m3;
    const double b = 8.0 * (m2 - m1 * m1);
    const double c = -8.0 * m1;

    std::vector<double> roots;
    if (std::abs(a) <= 1e-14 * (std::abs(b) / m1 + std::abs(c) / (m1 * m1))) {
        if (b != 0.0) roots.push_back(-c / b);
    } else {
        double disc = b * b - 4.0 * a * c;
        if (disc < 0.0 && disc > -1e-12 * b * b) disc = 0.0;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double qq = -0.5 * (b + std::copysign(sq, b));
            if (qq != 0.0) {
                roots.push_back(qq / a);
                roots.push_back(c / qq);
            } else {
                roots.push_back(-b / (2.0 * a));
            }
        }
    }

    std::optional<Ncx2Fit> best;
    long double best_res = 0;
    for (double alpha : roots) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) continue;
        double lambda = 0.5 * alpha * (alpha * m2 - alpha * m1 * m1 - 2.0 * m1);
        const double nu = alpha * m1 - lambda;
        // Exact zero noncentrality (e.g. a single Rayleigh interferer) lands
        // here as rounding noise of either sign.
        if (std::abs(lambda) <= 1e-10 * alpha * m1) lambda = 0.0;
        if (!(lambda >= 0.0) || !(nu > 0.0)) continue;
        const Ncx2Fit cand{nu, lambda, alpha};
        const long double res = residual_ld(cand, m);
        if (!best || res < best_res ||
            (res == best_res && alpha > best->scale_alpha)) {
            best = cand;
            best_res = res;
        }
    }
    if (!best) {
        throw InfeasibleFitError(
            "ncx2_fit_moments: no root of the moment quadratic gives a valid "
            "(nu, lambda, alpha)");
    }
    return *best;
}

NumericFitReport ncx2_fit_numeric(const RicianMoments& m, std::optional<Ncx2Fit> initial) {
    require_moments(m);
    std::vector<Vec3> starts;
    auto push = [&](double nu, double lam, double alpha) {
        if (nu > 0.0 && alpha > 0.0 && std::isfinite(nu) && std::isfinite(alpha)) {
            starts.push_back({std::log(nu), std::max(std::log(std::max(lam, 1e-300)), kMinLogLambda),
                              std::log(alpha)});
        }
    };
    if (initial) {
        push(initial->dof_v, initial->noncentrality_lambda, initial->scale_alpha);
    }
    const double var = m.m2 - m.m1 * m.m1;
    const double alpha0 = var > 0.0 ? 2.0 * m.m1 / var : 2.0 / m.m1;
    const double s0 = alpha0 * m.m1;
    for (double t : {1e-3, 0.3, 3.0, 30.0}) {
        push(s0 / (1.0 + t), s0 * t / (1.0 + t), alpha0);
    }

    NumericFitReport best;
    best.objective = std::numeric_limits<double>::infinity();
    for (const Vec3& p0 : starts) {
        const LmResult r = levenberg_marquardt(p0, m);
        if (r.f < best.objective) {
            best.fit = from_log(r.p);
            best.objective = r.f;
            best.iterations = r.iterations;
        }
    }
    best.converged = best.objective < 1e-16;
    return best;
}

double ncx2_lcr(const Ncx2Fit& fit, double doppler_hz, double threshold) {
    require_threshold(threshold);
    const double nu = fit.dof_v;
    const double lam = fit.noncentrality_lambda;
    const double alpha = fit.scale_alpha;
    if (!(nu > 0.0) || !(alpha > 0.0) || !std::isfinite(nu) || !std::isfinite(alpha)) {
        throw InvalidArgument("ncx2_lcr: dof and scale must be positive");
    }
    if (!(lam > 0.0) || !std::isfinite(lam)) {
        throw DomainError("ncx2_lcr: noncentrality must be > 0 (use gamma_lcr when it is 0)");
    }
    if (!(doppler_hz > 0.0)) {
        throw InvalidArgument("ncx2_lcr: doppler must be > 0");
    }
    if (threshold == 0.0) {
        if (nu <= 1.0) {
            throw DegenerateInputError("ncx2_lcr: rate diverges at T = 0 for dof <= 1");
        }
        return 0.0;
    }
    const double at = alpha * threshold;
    const double order = 0.5 * (nu - 2.0);
    const double log_lcr = 0.5 * std::log(kPi) + std::log(doppler_hz) +
                           0.25 * nu * std::log(at) - 0.5 * order * std::log(lam) -
                           0.5 * (lam + at) + specfun::log_bessel_i(order, std::sqrt(lam * at));
    return std::exp(log_lcr);
}

// Rician pipeline:
//  1. closed-form method of moments;
//  2. numeric moment matching if no quadratic root is admissible;
//  3. if the three moments cannot be matched by any scaled noncentral
//     chi-square (the aggregate is more skewed than the family allows), the
//     aggregate is replaced by N_eff = S1^2/S2 equal-power Rician branches:
//     nu = 2 N_eff, lambda = K nu, alpha = (K+1) nu / S1. This keeps m1 and m2
//     exact and reduces to the gamma fit at K = 0.
RicianFit fit_rician(const InterfererProfile& profile, bool allow_equivalent_branches) {
    const RicianMoments m = rician_moments(profile);
    try {
        const Ncx2Fit f = ncx2_fit_moments(m);
        return {f, FitMethod::closed_form, moment_residual(f, m)};
    } catch (const InfeasibleFitError&) {
    }
    const NumericFitReport num = ncx2_fit_numeric(m);
    if (num.converged) {
        return {num.fit, FitMethod::numeric, moment_residual(num.fit, m)};
    }
    if (!allow_equivalent_branches) {
        throw InfeasibleFitError("no scaled noncentral chi-square matches the aggregate moments "
                                 "(numeric objective " + std::to_string(num.objective) + ")");
    }
    const PowerSums s = power_sums(profile);
    const double k = profile.rician_k_linear;
    const double nu = 2.0 * s.s1 * s.s1 / s.s2;
    const Ncx2Fit f{nu, k * nu, (k + 1.0) * nu / s.s1};
    return {f, FitMethod::equivalent_branches, moment_residual(f, m)};
}

// --- AggregateModel -----------------------------------------------------------

AggregateModel::AggregateModel(const InterfererProfile& profile, Fading fading,
                               bool allow_equivalent_branches)
    : fading_(fading) {
    profile.validate();
    doppler_hz_ = profile.common_doppler().value_or(0.0);
    gamma_ = gamma_fit(profile);
    curvature_ = acf_curvature(profile);
    if (fading == Fading::rayleigh) {
        const MeanVariance mv = rayleigh_moments(profile);
        mean_ = mv.mean;
        mean_square_ = mv.mean * mv.mean + mv.variance;
    } else {
        const RicianMoments m = rician_moments(profile);
        mean_ = m.m1;
        mean_square_ = m.m2;
        rician_ = fit_rician(profile, allow_equivalent_branches);
    }
}

double AggregateModel::rms() const {
    return std::sqrt(mean_square_);
}

double AggregateModel::lcr(double threshold) const {
    if (fading_ == Fading::rayleigh) {
        return gamma_lcr(gamma_, curvature_, threshold);
    }
    if (doppler_hz_ <= 0.0) {
        throw MixedDopplerError("Rician LCR needs one Doppler shared by all interferers");
    }
    const Ncx2Fit& f = rician_->fit;
    if (f.noncentrality_lambda > 0.0) {
        return ncx2_lcr(f, doppler_hz_, threshold);
    }
    const GammaFit central{0.5 * f.dof_v, 0.5 * f.scale_alpha};
    return gamma_lcr(central, {-4.0 * kPi * kPi * doppler_hz_ * doppler_hz_}, threshold);
}

double AggregateModel::cdf(double threshold) const {
    require_threshold(threshold);
    if (fading_ == Fading::rayleigh) {
        return specfun::regularized_lower_gamma(gamma_.shape_r, gamma_.rate_theta * threshold);
    }
    const Ncx2Fit& f = rician_->fit;
    return specfun::ncx2_cdf(f.dof_v, f.noncentrality_lambda, f.scale_alpha * threshold);
}

double AggregateModel::sf(double threshold) const {
    require_threshold(threshold);
    if (fading_ == Fading::rayleigh) {
        return specfun::regularized_upper_gamma(gamma_.shape_r, gamma_.rate_theta * threshold);
    }
    const Ncx2Fit& f = rician_->fit;
    return specfun::ncx2_sf(f.dof_v, f.noncentrality_lambda, f.scale_alpha * threshold);
}

double AggregateModel::aed(double threshold) const {
    const double rate = lcr(threshold);
    if (!(rate > 0.0)) {
        throw UndefinedAedError("AED undefined: LCR is zero at threshold " +
                                std::to_string(threshold));
    }
    return sf(threshold) / rate;
}

double aggregate_cdf(const InterfererProfile& profile, Fading fading, double threshold) {
    return AggregateModel(profile, fading).cdf(threshold);
}

double aed(const InterfererProfile& profile, Fading fading, double doppler_hz,
           double threshold) {
    return AggregateModel(profile.with_doppler(doppler_hz), fading).aed(threshold);
}

double threshold_kappa(const InterfererProfile& profile, Fading fading, double threshold) {
    return threshold / AggregateModel(profile, fading).rms();
}

LcrCurve lcr_curve(const InterfererProfile& profile, Fading fading,
                   std::span<const double> kappa_grid, bool allow_equivalent_branches) {
    const auto f_d = profile.common_doppler();
    if (!f_d) {
        throw MixedDopplerError(
            "normalized LCR curves need one Doppler shared by all interferers");
    }
    for (std::size_t i = 0; i < kappa_grid.size(); ++i) {
        if (!(kappa_grid[i] > 0.0) || (i > 0 && !(kappa_grid[i] > kappa_grid[i - 1]))) {
            throw InvalidArgument("kappa grid must be positive and strictly increasing");
        }
    }
    const AggregateModel model(profile, fading, allow_equivalent_branches);
    LcrCurve curve;
    curve.doppler_hz = *f_d;
    curve.rms = model.rms();
    curve.points.reserve(kappa_grid.size());
    for (double kappa : kappa_grid) {
        CurvePoint pt;
        pt.kappa = kappa;
        pt.threshold = kappa * curve.rms;
        const double rate = model.lcr(pt.threshold);
        pt.lcr_norm_analytic = rate / curve.doppler_hz;
        pt.cdf_analytic = model.cdf(pt.threshold);
        if (rate > 0.0) {
            // The upper tail is summed directly so far-tail AEDs keep their
            // precision; sf + cdf = 1 to rounding.
            pt.aed_norm_analytic = model.sf(pt.threshold) / rate * curve.doppler_hz;
        }
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace lcr::analytic
