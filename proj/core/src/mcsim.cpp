// SPDX-License-Identifier: Apache-2.0

#include "lcr/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "lcr/error.hpp"
#include "rng.hpp"

namespace lcr::mcsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Phasors are advanced by recurrence inside fixed blocks of absolute sample
// indices and re-anchored exactly at each block start, so a sample's value
// does not depend on which call (or worker) produced it.
constexpr std::size_t kBlock = 4096;

double max_doppler(const InterfererProfile& profile) {
    return *std::max_element(profile.doppler_hz.begin(), profile.doppler_hz.end());
}

double rician_m2(const InterfererProfile& profile, analytic::Fading fading) {
    if (fading == analytic::Fading::rayleigh) {
        const auto mv = analytic::rayleigh_moments(profile);
        return mv.mean * mv.mean + mv.variance;
    }
    return analytic::rician_moments(profile).m2;
}

InterfererProfile for_fading(const InterfererProfile& profile, analytic::Fading fading) {
    return fading == analytic::Fading::rayleigh ? profile.with_k(0.0) : profile;
}

}  // namespace

void FadingSimConfig::validate() const {
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        throw InvalidArgument("simulation duration must be > 0");
    }
    if (oversample < 8) {
        throw InvalidArgument("oversample must be >= 8");
    }
    if (oscillators < 8) {
        throw InvalidArgument("oscillators must be >= 8");
    }
    if (workers == 0) {
        throw InvalidArgument("workers must be >= 1");
    }
}

std::size_t FadingSimConfig::sample_count(double doppler_hz) const {
    const double n = std::ceil(duration_s * sample_rate(doppler_hz));
    if (!(n >= 2.0)) {
        throw InvalidArgument("simulation too short: fewer than 2 samples");
    }
    return static_cast<std::size_t>(n);
}

FadingProcess::FadingProcess(double k_linear, double doppler_hz, int oscillators,
                             std::uint64_t seed, std::uint64_t stream_id) {
    if (!(k_linear >= 0.0) || !std::isfinite(k_linear)) {
        throw InvalidArgument("fading: K must be finite and >= 0");
    }
    if (!(doppler_hz > 0.0) || oscillators < 1) {
        throw InvalidArgument("fading: need doppler > 0 and at least one oscillator");
    }
    auto eng = detail::make_engine(seed, detail::RngDomain::fading, stream_id);
    const int m = oscillators;
    omega_.resize(m);
    phase_.resize(m);
    for (int n = 0; n < m; ++n) {
        // Arrival angle jittered inside the n-th of m equal sectors of the
        // circle; marginally uniform, so the ensemble ACF is exactly J0.
        const double angle = kTwoPi * (n + detail::uniform01(eng)) / m;
        omega_[n] = kTwoPi * doppler_hz * std::cos(angle);
        phase_[n] = kTwoPi * detail::uniform01(eng);
    }
    scatter_gain_ = std::sqrt(1.0 / ((k_linear + 1.0) * m));
    const double los_phase = kTwoPi * detail::uniform01(eng);
    los_ = std::polar(std::sqrt(k_linear / (k_linear + 1.0)), los_phase);
}

std::complex<double> FadingProcess::at(double t) const {
    std::complex<double> s = 0.0;
    for (std::size_t n = 0; n < omega_.size(); ++n) {
        s += std::polar(1.0, std::fmod(omega_[n] * t + phase_[n], kTwoPi));
    }
    return scatter_gain_ * s + los_;
}

void FadingProcess::fill(std::size_t first, double sample_rate,
                         std::span<std::complex<double>> out) const {
    std::fill(out.begin(), out.end(), std::complex<double>(0.0));
    const std::size_t end = first + out.size();
    std::size_t pos = first;
    while (pos < end) {
        const std::size_t block_start = pos - pos % kBlock;
        const std::size_t seg_end = std::min(end, block_start + kBlock);
        const double t0 = static_cast<double>(block_start) / sample_rate;
        for (std::size_t n = 0; n < omega_.size(); ++n) {
            std::complex<double> z = std::polar(1.0, std::fmod(omega_[n] * t0 + phase_[n], kTwoPi));
            const std::complex<double> step = std::polar(1.0, omega_[n] / sample_rate);
            for (std::size_t i = block_start; i < pos; ++i) z *= step;
            for (std::size_t i = pos; i < seg_end; ++i) {
                out[i - first] += z;
                z *= step;
            }
        }
        for (std::size_t i = pos; i < seg_end; ++i) {
            out[i - first] = scatter_gain_ * out[i - first] + los_;
        }
        pos = seg_end;
    }
}

std::vector<std::complex<double>> gen_fading(double k_linear, double doppler_hz,
                                             const FadingSimConfig& config,
                                             std::uint64_t stream_id) {
    config.validate();
    const FadingProcess proc(k_linear, doppler_hz, config.oscillators, config.seed, stream_id);
    std::vector<std::complex<double>> out(config.sample_count(doppler_hz));
    proc.fill(0, config.sample_rate(doppler_hz), out);
    return out;
}

InterferenceTrace aggregate_trace(const InterfererProfile& profile,
                                  const FadingSimConfig& config) {
    profile.validate();
    config.validate();
    const double fs = config.sample_rate(max_doppler(profile));
    const std::size_t count = config.sample_count(max_doppler(profile));

    std::vector<FadingProcess> procs;
    procs.reserve(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        procs.emplace_back(profile.rician_k_linear, profile.doppler_hz[i], config.oscillators,
                           config.seed, i);
    }

    InterferenceTrace trace;
    trace.sample_rate_hz = fs;
    trace.samples.assign(count, 0.0);

    const std::size_t chunks = (count + kBlock - 1) / kBlock;
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        std::vector<std::complex<double>> h(kBlock);
        for (std::size_t c = next++; c < chunks; c = next++) {
            const std::size_t first = c * kBlock;
            const std::size_t len = std::min(kBlock, count - first);
            std::span<std::complex<double>> hs(h.data(), len);
            double* dst = trace.samples.data() + first;
            for (std::size_t i = 0; i < procs.size(); ++i) {
                procs[i].fill(first, fs, hs);
                const double p = profile.powers[i];
                for (std::size_t n = 0; n < len; ++n) dst[n] += p * std::norm(hs[n]);
            }
        }
    };
    const unsigned workers = std::min<std::size_t>(config.workers, chunks);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return trace;
}

double CrossingStats::mean_sojourn() const {
    if (sojourn_durations_s.empty()) return 0.0;
    return std::accumulate(sojourn_durations_s.begin(), sojourn_durations_s.end(), 0.0) /
           static_cast<double>(sojourn_durations_s.size());
}

CrossingStats count_crossings(const InterferenceTrace& trace, double threshold) {
    const auto& s = trace.samples;
    if (s.size() < 2 || !(trace.sample_rate_hz > 0.0)) {
        throw InvalidArgument("count_crossings: need >= 2 samples and a positive rate");
    }
    CrossingStats st;
    st.total_time_s = static_cast<double>(s.size()) / trace.sample_rate_hz;
    std::size_t above = 0;
    std::size_t run = 0;
    bool run_started_inside = false;  // run began after a sample <= T
    for (std::size_t n = 0; n < s.size(); ++n) {
        if (s[n] > threshold) {
            ++above;
            if (run == 0) run_started_inside = n > 0;
            ++run;
        } else {
            if (run > 0 && run_started_inside) {
                st.sojourn_durations_s.push_back(static_cast<double>(run) / trace.sample_rate_hz);
            }
            run = 0;
        }
        if (n + 1 < s.size() && s[n] <= threshold && threshold < s[n + 1]) {
            ++st.up_crossings;
        }
    }
    st.fraction_above = static_cast<double>(above) / static_cast<double>(s.size());
    return st;
}

void fill_empirical(LcrCurve& curve, const InterferenceTrace& trace) {
    for (CurvePoint& pt : curve.points) {
        const CrossingStats st = count_crossings(trace, pt.threshold);
        pt.crossings = st.up_crossings;
        pt.sojourns = st.sojourn_durations_s.size();
        pt.lcr_norm_emp = static_cast<double>(st.up_crossings) / (st.total_time_s * curve.doppler_hz);
        pt.cdf_emp = 1.0 - st.fraction_above;
        if (st.sojourn_durations_s.empty()) {
            pt.aed_norm_emp.reset();
        } else {
            pt.aed_norm_emp = st.mean_sojourn() * curve.doppler_hz;
        }
    }
}

LcrCurve empirical_curve(const InterfererProfile& profile, analytic::Fading fading,
                         std::span<const double> kappa_grid,
                         const FadingSimConfig& config) {
    const auto f_d = profile.common_doppler();
    if (!f_d) {
        throw MixedDopplerError("normalized curves need one Doppler shared by all interferers");
    }
    const InterfererProfile sim_profile = for_fading(profile, fading);
    LcrCurve curve;
    curve.doppler_hz = *f_d;
    curve.rms = std::sqrt(rician_m2(sim_profile, fading));
    for (double kappa : kappa_grid) {
        CurvePoint pt;
        pt.kappa = kappa;
        pt.threshold = kappa * curve.rms;
        curve.points.push_back(pt);
    }
    fill_empirical(curve, aggregate_trace(sim_profile, config));
    return curve;
}

ConditionalVarianceFit conditional_variance_check(const InterferenceTrace& trace,
                                                  int num_bins) {
    const auto& s = trace.samples;
    if (s.size() < 100000) {
        throw InsufficientSamplesError("conditional_variance_check: need >= 1e5 samples");
    }
    if (num_bins < 5) {
        throw InvalidArgument("conditional_variance_check: need >= 5 bins");
    }
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    if (!(*hi - *lo > 1e-4 * std::max(std::abs(*hi), 1e-300))) {
        throw DegenerateInputError("conditional_variance_check: trace is constant");
    }

    const std::size_t m = s.size() - 2;
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{1});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });

    const double half_fs = 0.5 * trace.sample_rate_hz;
    ConditionalVarianceFit fit;
    double level_sum = 0.0;
    for (int b = 0; b < num_bins; ++b) {
        const std::size_t from = m * b / num_bins;
        const std::size_t to = m * (b + 1) / num_bins;
        double lv = 0.0, d1 = 0.0, d2 = 0.0;
        for (std::size_t k = from; k < to; ++k) {
            const std::size_t n = order[k];
            const double d = (s[n + 1] - s[n - 1]) * half_fs;
            lv += s[n];
            d1 += d;
            d2 += d * d;
        }
        const double cnt = static_cast<double>(to - from);
        level_sum += lv;
        const double mean_d = d1 / cnt;
        fit.bin_level.push_back(lv / cnt);
        fit.bin_variance.push_back((d2 - cnt * mean_d * mean_d) / (cnt - 1.0));
    }
    fit.mean_level = level_sum / static_cast<double>(m);

    const double nb = num_bins;
    const double mx = std::accumulate(fit.bin_level.begin(), fit.bin_level.end(), 0.0) / nb;
    const double my = std::accumulate(fit.bin_variance.begin(), fit.bin_variance.end(), 0.0) / nb;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int b = 0; b < num_bins; ++b) {
        const double dx = fit.bin_level[b] - mx;
        const double dy = fit.bin_variance[b] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw DegenerateInputError("conditional_variance_check: no spread across bins");
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = sxy * sxy / (sxx * syy);
    return fit;
}

std::vector<double> sample_aggregate(const InterfererProfile& profile,
                                     analytic::Fading fading, std::size_t count,
                                     std::uint64_t seed) {
    profile.validate();
    const double k = fading == analytic::Fading::rayleigh ? 0.0 : profile.rician_k_linear;
    const double scatter = std::sqrt(0.5 / (k + 1.0));
    const double los = std::sqrt(k / (k + 1.0));
    auto eng = detail::make_engine(seed, detail::RngDomain::samples);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> out(count);
    for (double& v : out) {
        double sum = 0.0;
        for (double p : profile.powers) {
            const double re = scatter * gauss(eng) + los;
            const double im = scatter * gauss(eng);
            sum += p * (re * re + im * im);
        }
        v = sum;
    }
    return out;
}

double kolmogorov_distance(std::span<const double> sorted_samples,
                           const std::function<double(double)>& cdf, std::size_t stride) {
    const std::size_t n = sorted_samples.size();
    if (n == 0) {
        throw InvalidArgument("kolmogorov_distance: no samples");
    }
    stride = std::max<std::size_t>(stride, 1);
    const double inv = 1.0 / static_cast<double>(n);
    double d = 0.0;
    for (std::size_t i = 0; i < n; i += stride) {
        const double f = cdf(sorted_samples[i]);
        d = std::max({d, (i + 1) * inv - f, f - i * inv});
    }
    return d;
}

void write_trace_csv(std::ostream& out, const InterferenceTrace& trace) {
    out << "time_s,power\n";
    for (std::size_t n = 0; n < trace.samples.size(); ++n) {
        out << format_number(static_cast<double>(n) / trace.sample_rate_hz) << ','
            << format_number(trace.samples[n]) << '\n';
    }
}

}  // namespace lcr::mcsim
