// SPDX-License-Identifier: Apache-2.0

#include "lcr/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lcr/error.hpp"
#include "lcr/specfun_detail.hpp"

namespace lcr::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxGammaIterations = 200000;

// Largest argument of exp() that does not overflow.
const double kLogMax = std::log(std::numeric_limits<double>::max());

// Below this |x| J0 is summed from its ascending series, above it from the
// Hankel asymptotic expansion. Both are accurate to ~1e-12 absolute at 13.
constexpr double kJ0SeriesLimit = 13.0;

// Below this x, I_nu is summed from its ascending series.
constexpr double kBesselISeriesLimit = 30.0;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + ": non-finite argument");
    }
}

// ln(x^a e^-x / Gamma(a)), the common prefactor of P and Q.
double log_gamma_prefactor(double a, double x) {
    return a * std::log(x) - x - ln_gamma(a);
}

// Series for P(a, x); good for x < a + 1.
SpecFunResult lower_gamma_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    int n = 1;
    for (; n < kMaxGammaIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            break;
        }
    }
    SpecFunResult r;
    r.converged = n < kMaxGammaIterations;
    r.terms_used = n;
    r.value = sum * std::exp(log_gamma_prefactor(a, x));
    return r;
}

// Modified Lentz continued fraction for Q(a, x); good for x >= a + 1.
SpecFunResult upper_gamma_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    int i = 1;
    for (; i < kMaxGammaIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    SpecFunResult r;
    r.converged = i < kMaxGammaIterations;
    r.terms_used = i;
    r.value = std::exp(log_gamma_prefactor(a, x)) * h;
    return r;
}

void check_gamma_args(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("incomplete gamma: shape must be positive and finite");
    }
    if (!(x >= 0.0) || std::isnan(x)) {
        throw DomainError("incomplete gamma: argument must be >= 0");
    }
}

// Evaluates P (upper == false) or Q (upper == true).
SpecFunResult incomplete_gamma(double a, double x, bool upper) {
    check_gamma_args(a, x);
    if (x == 0.0) {
        return {upper ? 1.0 : 0.0, true, 1, 0.0};
    }
    if (std::isinf(x)) {
        return {upper ? 0.0 : 1.0, true, 1, 0.0};
    }
    SpecFunResult r;
    if (x < a + 1.0) {
        r = lower_gamma_series(a, x);
        if (upper) r.value = 1.0 - r.value;
    } else {
        r = upper_gamma_fraction(a, x);
        if (!upper) r.value = 1.0 - r.value;
    }
    r.value = std::clamp(r.value, 0.0, 1.0);
    return r;
}

double unwrap(const SpecFunResult& r, const char* what) {
    if (!r.converged) {
        throw ConvergenceError(std::string(what) + ": did not converge after " +
                               std::to_string(r.terms_used) + " terms");
    }
    return r.value;
}

// Hankel coefficients u_k = a_k(nu) / x^k, shared by the J and I expansions.
// Returns false if the series starts diverging before reaching the tolerance.
struct HankelSums {
    double even = 0.0;  // u0 - u2 + u4 - ...
    double odd = 0.0;   // u1 - u3 + u5 - ...
    double alternating = 0.0;  // u0 - u1 + u2 - ...
    double last_term = 0.0;  // magnitude of the smallest term added
    int terms = 0;
    bool converged = false;
};

HankelSums hankel_sums(double order, double x) {
    const double mu = 4.0 * order * order;
    HankelSums s;
    double u = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    s.even = 1.0;
    s.alternating = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd_factor = 2.0 * k - 1.0;
        u *= (mu - odd_factor * odd_factor) / (k * 8.0 * x);
        const double au = std::abs(u);
        if (au > prev) {
            s.terms = k;
            return s;
        }
        prev = au;
        s.last_term = au;
        const double sign_pair = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            s.even += sign_pair * u;
        } else {
            s.odd += sign_pair * u;
        }
        s.alternating += (k % 2 == 0) ? u : -u;
        if (au < 1e-17 * std::max(1.0, std::abs(s.alternating))) {
            s.terms = k + 1;
            s.converged = true;
            return s;
        }
    }
    s.terms = 200;
    return s;
}

}  // namespace

double ln_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("ln_gamma: argument must be positive and finite");
    }
    static constexpr std::array<double, 14> cof = {
        57.1562356658629235,     -59.5979603554754912,
        14.1360979747417471,     -0.491913816097620199,
        .339946499848118887e-4,  .465236289270485756e-4,
        -.983744753048795646e-4, .158088703224912494e-3,
        -.210264441724104883e-3, .217439618115212643e-3,
        -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;  // g + 1/2 with g = 671/128
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : cof) {
        ser += c / ++y;
    }
    return tmp + std::log(2.5066282746310005 * ser / x);
}

SpecFunResult regularized_lower_gamma_eval(double a, double x) {
    return incomplete_gamma(a, x, false);
}

double regularized_lower_gamma(double a, double x) {
    return unwrap(incomplete_gamma(a, x, false), "regularized_lower_gamma");
}

double regularized_upper_gamma(double a, double x) {
    return unwrap(incomplete_gamma(a, x, true), "regularized_upper_gamma");
}

SpecFunResult bessel_j0_eval(double x) {
    require_finite(x, "bessel_j0");
    const double ax = std::abs(x);
    if (ax <= kJ0SeriesLimit) {
        // sum_k (-1)^k (x^2/4)^k / (k!)^2
        const double q = 0.25 * ax * ax;
        double term = 1.0;
        double sum = 1.0;
        int k = 1;
        for (; k < 200; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            sum += term;
            if (std::abs(term) < 1e-17 && static_cast<double>(k) > 0.5 * ax) {
                break;
            }
        }
        // Terms decrease monotonically once k > |x|/2, so the alternating
        // tail is bounded by the first omitted term.
        const double next = std::abs(term) * q / ((k + 1.0) * (k + 1.0));
        return {sum, true, k + 1, next};
    }
    const HankelSums h = hankel_sums(0.0, ax);
    const double chi = ax - 0.25 * std::numbers::pi;
    const double amp = std::sqrt(2.0 / (std::numbers::pi * ax));
    const double value = amp * (h.even * std::cos(chi) - h.odd * std::sin(chi));
    // Truncating at the smallest term leaves an error of about that term.
    const double bound = amp * h.last_term;
    return {value, bound < 1e-10, h.terms, bound};
}

double bessel_j0(double x) {
    return unwrap(bessel_j0_eval(x), "bessel_j0");
}

namespace detail {

double log_bessel_i_series(double order, double x) {
    if (x == 0.0) {
        if (order == 0.0) return 0.0;
        return order > 0.0 ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    }
    const double q = 0.25 * x * x;
    // Scaled partial sums: true sum = sum * exp(log_scale).
    double log_scale = 0.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 100000; ++k) {
        term *= q / (static_cast<double>(k) * (order + k));
        sum += term;
        if (sum > 1e250) {
            sum *= 1e-250;
            term *= 1e-250;
            log_scale += 250.0 * std::numbers::ln10;
        }
        if (term < kEps * 0.25 * sum && static_cast<double>(k) > 0.5 * x) {
            return order * std::log(0.5 * x) - ln_gamma(order + 1.0) +
                   std::log(sum) + log_scale;
        }
    }
    throw ConvergenceError("bessel_i: ascending series did not converge");
}

bool log_bessel_i_asymptotic(double order, double x, double& out) {
    const HankelSums h = hankel_sums(order, x);
    if (!h.converged || !(h.alternating > 0.0)) {
        return false;
    }
    out = x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(h.alternating);
    return true;
}

}  // namespace detail

double log_bessel_i(double order, double x) {
    if (!(order > -1.0) || !std::isfinite(order)) {
        throw DomainError("log_bessel_i: order must be > -1 and finite");
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError("bessel_i: argument must be >= 0 and finite");
    }
    if (x > kBesselISeriesLimit) {
        double v = 0.0;
        if (detail::log_bessel_i_asymptotic(order, x, v)) {
            return v;
        }
    }
    return detail::log_bessel_i_series(order, x);
}

SpecFunResult bessel_i_eval(double order, double x) {
    if (!(order >= 0.0)) {
        throw DomainError("bessel_i: order must be >= 0");
    }
    const double lv = log_bessel_i(order, x);
    if (lv > kLogMax) {
        return {std::numeric_limits<double>::infinity(), false, 1, 0.0};
    }
    return {std::exp(lv), true, 1, 0.0};
}

double bessel_i(double order, double x) {
    const SpecFunResult r = bessel_i_eval(order, x);
    if (!r.converged) {
        throw OverflowError("bessel_i: result overflows double range");
    }
    return r.value;
}

namespace {

// Poisson(nc/2) mixture of central chi-square terms. Summation starts at the
// modal index and walks outwards so leading weights never underflow.
SpecFunResult ncx2_mixture(double dof, double nc, double x, bool upper) {
    if (!(dof > 0.0) || !std::isfinite(dof)) {
        throw DomainError("ncx2: dof must be positive and finite");
    }
    if (!(nc >= 0.0) || !std::isfinite(nc)) {
        throw DomainError("ncx2: noncentrality must be >= 0 and finite");
    }
    if (!(x >= 0.0) || std::isnan(x)) {
        throw DomainError("ncx2: argument must be >= 0");
    }
    const double a = 0.5 * dof;
    const double y = 0.5 * x;
    if (nc == 0.0) {
        return incomplete_gamma(a, y, upper);
    }
    if (x == 0.0) {
        return {upper ? 1.0 : 0.0, true, 1, 0.0};
    }

    constexpr double kTailMass = 1e-15;
    constexpr int kMaxTerms = 1000000;
    const double mu = 0.5 * nc;
    const double j0 = std::floor(mu);
    const double w0 = std::exp(-mu + j0 * std::log(mu) - ln_gamma(j0 + 1.0));

    double sum = 0.0;
    int terms = 0;
    bool converged = true;

    auto central = [&](double j) {
        const SpecFunResult g = incomplete_gamma(a + j, y, upper);
        converged = converged && g.converged;
        return g.value;
    };

    // Forward from the mode.
    double w = w0;
    for (double j = j0;; j += 1.0) {
        sum += w * central(j);
        ++terms;
        w *= mu / (j + 1.0);
        const double ratio = mu / (j + 2.0);
        if (ratio < 1.0 && w / (1.0 - ratio) < kTailMass) break;
        if (terms > kMaxTerms) {
            converged = false;
            break;
        }
    }
    // Backward from the mode.
    w = w0;
    for (double j = j0 - 1.0; j >= 0.0; j -= 1.0) {
        w *= (j + 1.0) / mu;
        sum += w * central(j);
        ++terms;
        const double ratio = j / mu;
        if (w * ratio / (1.0 - ratio) < kTailMass) break;
        if (terms > kMaxTerms) {
            converged = false;
            break;
        }
    }
    return {std::clamp(sum, 0.0, 1.0), converged, terms, 0.0};
}

}  // namespace

SpecFunResult ncx2_cdf_eval(double dof, double noncentrality, double x) {
    return ncx2_mixture(dof, noncentrality, x, false);
}

double ncx2_cdf(double dof, double noncentrality, double x) {
    return unwrap(ncx2_mixture(dof, noncentrality, x, false), "ncx2_cdf");
}

double ncx2_sf(double dof, double noncentrality, double x) {
    return unwrap(ncx2_mixture(dof, noncentrality, x, true), "ncx2_sf");
}

}  // namespace lcr::specfun
