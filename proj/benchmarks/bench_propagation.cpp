// Timings for the hot paths: kernel evaluation, the chi = 0 propagation with
// heat, a full erasure run and the oracle eigendecomposition.

#include <benchmark/benchmark.h>

#include <numbers>

#include "landauer/bath_correlation.hpp"
#include "landauer/bloch_dynamics.hpp"
#include "landauer/bounds.hpp"
#include "landauer/exact_oracle.hpp"

using namespace landauer;

static void BM_CorrelatorsSeries(benchmark::State& state) {
    const bath::OhmicKernels kernels(bath::BathSpec{}, bath::OhmicKernels::Method::series);
    double tau = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels.correlators(tau, 1.0));
        tau += 0.01;
    }
}
BENCHMARK(BM_CorrelatorsSeries);

static void BM_CorrelatorsQuadrature(benchmark::State& state) {
    const bath::OhmicKernels kernels(bath::BathSpec{}, bath::OhmicKernels::Method::quadrature);
    double tau = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels.correlators(tau, 1.0));
        tau += 0.01;
    }
}
BENCHMARK(BM_CorrelatorsQuadrature);

static void BM_PropagateWithHeat(benchmark::State& state) {
    const bath::OhmicKernels kernels(bath::BathSpec{});
    dynamics::PropagationOptions opt;
    opt.t_max = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto traj = dynamics::propagate_with_heat({0.2, 0.0, -0.5}, std::numbers::pi / 4, kernels, opt);
        benchmark::DoNotOptimize(traj.w.back());
    }
}
BENCHMARK(BM_PropagateWithHeat)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Erasure(benchmark::State& state) {
    const bath::OhmicKernels kernels(bath::BathSpec{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(bounds::run_erasure({0.0, 0.0, 0.5}, std::numbers::pi / 4, kernels));
    }
}
BENCHMARK(BM_Erasure)->Unit(benchmark::kMillisecond);

static void BM_OracleSetup(benchmark::State& state) {
    oracle::OracleConfig c;
    c.n_levels = static_cast<int>(state.range(0));
    for (auto _ : state) {
        oracle::OracleSystem sys(c);
        benchmark::DoNotOptimize(sys.heat(1.0));
    }
}
BENCHMARK(BM_OracleSetup)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
