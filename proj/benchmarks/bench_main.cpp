#include <benchmark/benchmark.h>

#include <cmath>

#include "sdlab/datum.hpp"
#include "sdlab/experiments.hpp"
#include "sdlab/kernels.hpp"
#include "sdlab/profiles.hpp"
#include "sdlab/quadrature.hpp"

using namespace sdlab;

namespace {

void BM_KernelsOscillatory(benchmark::State& state) {
    double r = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_kernels(1000.0, {r, 3}));
        r = r < 1.0 ? r + 1e-6 : 0.3;
    }
}
BENCHMARK(BM_KernelsOscillatory);

void BM_KernelsOverdamped(benchmark::State& state) {
    double r = 2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_kernels(1000.0, {r, 3}));
        r = r < 50.0 ? r + 1e-5 : 2.0;
    }
}
BENCHMARK(BM_KernelsOverdamped);

void BM_LowfreqFamily(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(lowfreq_family(1, k, 512.0, 0.4));
}
BENCHMARK(BM_LowfreqFamily)->Arg(0)->Arg(2)->Arg(4);

void BM_HighfreqRemainder(benchmark::State& state) {
    // r near sqrt(2) is the worst case: the coefficient tail converges at
    // ratio 1/2 and needs the longest jet.
    const double r = state.range(0) / 100.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(highfreq_remainder(1, 1, 64.0, r));
}
BENCHMARK(BM_HighfreqRemainder)->Arg(142)->Arg(200)->Arg(400);

void BM_Lemma7Norm(benchmark::State& state) {
    const double t = std::pow(2.0, state.range(0));
    QuadConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(lemma7_integral(3, t, cfg));
    state.SetLabel("t=2^" + std::to_string(state.range(0)));
}
BENCHMARK(BM_Lemma7Norm)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ResidualNormLowBall(benchmark::State& state) {
    const double t = std::pow(2.0, state.range(0));
    QuadConfig cfg;
    std::vector<DatumComponent> g{{Gaussian{1.0}, AngularMonomial::one(), 1.0},
                                  {Gaussian{1.0}, AngularMonomial::axis(0), 0.5}};
    const InitialDatum datum = make_datum(g, g, 2.0, 2.0, 2);
    ResidualSpec spec;
    spec.subtract_A1 = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(residual_norm(datum, 2, t, spec, Region::LowBall, cfg));
    state.SetLabel("t=2^" + std::to_string(state.range(0)));
}
BENCHMARK(BM_ResidualNormLowBall)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_HighShellResidual(benchmark::State& state) {
    QuadConfig cfg;
    const InitialDatum datum = make_threshold_datum(3, 0.0, 0.04);
    ResidualSpec spec;
    spec.subtract_C = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            residual_norm(datum, 3, 4096.0, spec, Region::HighShell, cfg));
}
BENCHMARK(BM_HighShellResidual)->Unit(benchmark::kMillisecond);

void BM_SphereMoment(benchmark::State& state) {
    const AngularMonomial alpha = AngularMonomial::axis(0, 2) * AngularMonomial::axis(1, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(sphere_moment(alpha, 19));
}
BENCHMARK(BM_SphereMoment);

} // namespace

BENCHMARK_MAIN();
