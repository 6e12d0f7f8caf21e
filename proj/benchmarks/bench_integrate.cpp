#include <benchmark/benchmark.h>

#include "shellrg/initial_conditions.hpp"
#include "shellrg/trajectory.hpp"

using namespace shellrg;

namespace {

void BM_IntegrateExplicitDyadic(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const ModelSpec m = dyadicModel();
    const ShellState ic = builtinIc(BuiltinIc::IC2, m, N + 1);
    SolverConfig cfg;
    for (auto _ : state) {
        const EndpointResult r = integrateEndpoint(m, CanonicalCutoff{N, 1, {}, 0.0},
                                                   dyadicDefaultBc(), ic, 0.0, 1.0, cfg);
        benchmark::DoNotOptimize(r.packed.data());
    }
}

void BM_IntegrateStiffDyadic(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const ModelSpec m = dyadicModel();
    const ShellState ic = builtinIc(BuiltinIc::IC2, m, N + 1);
    SolverConfig cfg;
    cfg.method = Method::StiffAdaptive;
    cfg.maxStep = 0.005;
    for (auto _ : state) {
        const EndpointResult r = integrateEndpoint(m, CanonicalCutoff{N, 1, {}, 0.0},
                                                   dyadicDefaultBc(), ic, 0.0, 1.0, cfg);
        benchmark::DoNotOptimize(r.packed.data());
    }
}

void BM_IntegrateStiffViscous(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    const ModelSpec m = dyadicModel();
    const ShellState ic = builtinIc(BuiltinIc::IC2, m, M);
    SolverConfig cfg;
    cfg.method = Method::StiffAdaptive;
    for (auto _ : state) {
        const EndpointResult r = integrateEndpoint(m, Viscous{std::exp2(-30.0)},
                                                   dyadicDefaultBc(), ic, 0.0, 0.5, cfg);
        benchmark::DoNotOptimize(r.packed.data());
    }
}

} // namespace

BENCHMARK(BM_IntegrateExplicitDyadic)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateStiffDyadic)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateStiffViscous)->Arg(30)->Arg(40)->Unit(benchmark::kMillisecond);
