// Microbenchmarks for the hot paths: matrix assembly (both backends), the
// high-relative-accuracy eigensolve, phase integrals, and the coherent
// transform quadrature.

#include <benchmark/benchmark.h>

#include <fdspec/asymptotics.hpp>
#include <fdspec/coherent.hpp>
#include <fdspec/quantization.hpp>
#include <fdspec/spectrum.hpp>

using namespace fdspec;

namespace {

void BM_OscillatorBuildZeta(benchmark::State& state) {
    auto params = ModelParams::zeta_family(1.0, 1.0);
    OscillatorBasisSpec basis;
    basis.size = static_cast<int>(state.range(0));
    basis.omega = kTwoPi;
    for (auto _ : state)
        benchmark::DoNotOptimize(build_matrix_oscillator(params, basis));
}
BENCHMARK(BM_OscillatorBuildZeta)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_OscillatorBuildMn(benchmark::State& state) {
    auto params = ModelParams::mn_family(1.0, 1, 1);
    OscillatorBasisSpec basis;
    basis.size = static_cast<int>(state.range(0));
    basis.omega = kTwoPi;
    basis.center = default_center(params);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_matrix_oscillator(params, basis));
}
BENCHMARK(BM_OscillatorBuildMn)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_GridBuild(benchmark::State& state) {
    auto params = ModelParams::zeta_family(1.0, 1.0);
    GridSpec grid;
    grid.length = 8.0;
    grid.points = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_matrix_grid(params, grid, 30.0));
}
BENCHMARK(BM_GridBuild)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Eigensolve(benchmark::State& state) {
    auto params = ModelParams::zeta_family(1.0, 1.0);
    OscillatorBasisSpec basis;
    basis.size = static_cast<int>(state.range(0));
    basis.omega = kTwoPi;
    OperatorMatrix M = build_matrix_oscillator(params, basis);
    for (auto _ : state)
        benchmark::DoNotOptimize(compute_spectrum(M));
}
BENCHMARK(BM_Eigensolve)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_PhaseIntegral(benchmark::State& state) {
    auto params = ModelParams::mn_family(0.25, 1, 1);
    CoherentFrame frame = coherent_constants(params);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            phase_integral(params, frame, SymbolVariant::UpperSymbol, 1e4));
}
BENCHMARK(BM_PhaseIntegral)->Unit(benchmark::kMillisecond);

void BM_CoherentTransform(benchmark::State& state) {
    auto params = ModelParams::zeta_family(1.0, 1.0);
    CoherentFrame frame = coherent_constants(params);
    TestFunction psi = TestFunction::ground_coherent(frame, 0.3);
    for (auto _ : state)
        benchmark::DoNotOptimize(coherent_transform(psi, frame, {0.4, -0.2}));
}
BENCHMARK(BM_CoherentTransform)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
