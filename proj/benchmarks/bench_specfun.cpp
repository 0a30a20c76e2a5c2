// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "lcr/specfun.hpp"

namespace {

void BM_LnGamma(benchmark::State& state) {
    double x = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lcr::specfun::ln_gamma(x));
        x = x < 150.0 ? x * 1.7 : 0.37;
    }
}
BENCHMARK(BM_LnGamma);

void BM_RegularizedLowerGamma(benchmark::State& state) {
    const double a = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lcr::specfun::regularized_lower_gamma(a, 0.9 * a));
    }
}
BENCHMARK(BM_RegularizedLowerGamma)->Arg(1)->Arg(10)->Arg(1000);

void BM_BesselJ0(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lcr::specfun::bessel_j0(x));
        x = x < 100.0 ? x + 0.731 : 0.1;
    }
}
BENCHMARK(BM_BesselJ0);

// Series branch below 30, Hankel expansion above.
void BM_LogBesselI(benchmark::State& state) {
    const double x = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lcr::specfun::log_bessel_i(1.5, x));
    }
}
BENCHMARK(BM_LogBesselI)->Arg(1)->Arg(25)->Arg(40)->Arg(800);

void BM_Ncx2Cdf(benchmark::State& state) {
    const double lam = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lcr::specfun::ncx2_cdf(4.0, lam, lam + 4.0));
    }
}
BENCHMARK(BM_Ncx2Cdf)->Arg(1)->Arg(20)->Arg(500);

}  // namespace
