// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "lcr/analytic.hpp"
#include "lcr/curve.hpp"
#include "lcr/mcsim.hpp"
#include "lcr/scenario.hpp"

namespace {

using lcr::analytic::Fading;
using lcr::scenario::Fixture;

void BM_FitRician(benchmark::State& state) {
    auto p = lcr::scenario::fixture_profile(Fixture::dominant, 25.0, 10.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lcr::analytic::fit_rician(p));
    }
}
BENCHMARK(BM_FitRician);

void BM_AnalyticCurve(benchmark::State& state) {
    const bool rician = state.range(0) != 0;
    auto p = lcr::scenario::fixture_profile(Fixture::no_dominant, 25.0, rician ? 10.0 : 0.0);
    auto grid = lcr::default_kappa_grid(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            lcr::analytic::lcr_curve(p, rician ? Fading::rician : Fading::rayleigh, grid));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_AnalyticCurve)->Arg(0)->Arg(1)->ArgNames({"rician"});

void BM_AggregateTrace(benchmark::State& state) {
    auto p = lcr::scenario::fixture_profile(Fixture::dominant, 25.0, 0.0);
    lcr::mcsim::FadingSimConfig cfg;
    cfg.duration_s = static_cast<double>(state.range(0));
    std::size_t n = 0;
    for (auto _ : state) {
        auto tr = lcr::mcsim::aggregate_trace(p, cfg);
        n = tr.samples.size();
        benchmark::DoNotOptimize(tr.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_AggregateTrace)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_CountCrossings(benchmark::State& state) {
    auto p = lcr::scenario::fixture_profile(Fixture::no_dominant, 25.0, 0.0);
    lcr::mcsim::FadingSimConfig cfg;
    cfg.duration_s = 60;
    auto tr = lcr::mcsim::aggregate_trace(p, cfg);
    const double level = p.total_power();
    for (auto _ : state) {
        benchmark::DoNotOptimize(lcr::mcsim::count_crossings(tr, level));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tr.samples.size()));
}
BENCHMARK(BM_CountCrossings)->Unit(benchmark::kMicrosecond);

}  // namespace
