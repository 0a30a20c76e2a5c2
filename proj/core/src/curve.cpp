// SPDX-License-Identifier: Apache-2.0

#include "lcr/curve.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "lcr/error.hpp"

namespace lcr {

std::vector<double> log_spaced_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2) {
        throw InvalidArgument("log_spaced_grid: need 0 < lo < hi and >= 2 points");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double step = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        grid[i] = lo * std::exp(step * i);
    }
    grid.back() = hi;
    return grid;
}

std::vector<double> default_kappa_grid(double threshold_kappa) {
    return log_spaced_grid(0.05 * threshold_kappa, 3.0 * threshold_kappa, 60);
}

void mark_threshold(LcrCurve& curve, double threshold_kappa) {
    if (curve.points.empty() || !(threshold_kappa > 0.0)) return;
    std::size_t best = 0;
    double best_dist = INFINITY;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        curve.points[i].is_threshold = false;
        const double d = std::abs(std::log(curve.points[i].kappa / threshold_kappa));
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    curve.points[best].is_threshold = true;
}

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

void cell(std::ostream& out, const std::optional<double>& v) {
    if (v) out << format_number(*v);
}

}  // namespace

void write_curve_csv(std::ostream& out, const LcrCurve& curve) {
    out << kCurveCsvHeader << '\n';
    for (const CurvePoint& p : curve.points) {
        out << format_number(p.kappa) << ',' << format_number(p.threshold) << ',';
        cell(out, p.lcr_norm_analytic);
        out << ',';
        cell(out, p.aed_norm_analytic);
        out << ',';
        cell(out, p.cdf_analytic);
        out << ',';
        cell(out, p.lcr_norm_emp);
        out << ',';
        cell(out, p.aed_norm_emp);
        out << ',';
        cell(out, p.cdf_emp);
        out << ',';
        if (p.crossings) out << *p.crossings;
        out << ',' << (p.is_threshold ? 1 : 0) << '\n';
    }
}

}  // namespace lcr
