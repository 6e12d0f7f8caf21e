#include <benchmark/benchmark.h>

#include "shellrg/initial_conditions.hpp"
#include "shellrg/rhs.hpp"

using namespace shellrg;

namespace {

void BM_RhsDyadicCutoff(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const ModelSpec m = dyadicModel();
    PackedRhs sys(m, CanonicalCutoff{N, 1, {}, 0.0}, dyadicDefaultBc(), N + 1);
    const std::vector<double> y = builtinIc(BuiltinIc::IC2, m, N + 1).packed();
    std::vector<double> dy(y.size());
    for (auto _ : state) {
        sys.eval(0.5, y.data(), dy.data());
        benchmark::DoNotOptimize(dy.data());
    }
    state.SetItemsProcessed(state.iterations() * (N + 1));
}

void BM_RhsSabraCutoff(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const ModelSpec m = sabraModel();
    PackedRhs sys(m, CanonicalCutoff{N, 2, {}, 0.0}, sabraDefaultBc(), N + 2);
    const std::vector<double> y = builtinIc(BuiltinIc::IC2, m, N + 2).packed();
    std::vector<double> dy(y.size());
    for (auto _ : state) {
        sys.eval(0.5, y.data(), dy.data());
        benchmark::DoNotOptimize(dy.data());
    }
    state.SetItemsProcessed(state.iterations() * (N + 2));
}

void BM_RhsViscous(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    const ModelSpec m = dyadicModel();
    PackedRhs sys(m, Viscous{1e-8}, dyadicDefaultBc(), M);
    const std::vector<double> y = builtinIc(BuiltinIc::IC2, m, M).packed();
    std::vector<double> dy(y.size());
    for (auto _ : state) {
        sys.eval(0.5, y.data(), dy.data());
        benchmark::DoNotOptimize(dy.data());
    }
    state.SetItemsProcessed(state.iterations() * M);
}

} // namespace

BENCHMARK(BM_RhsDyadicCutoff)->Arg(16)->Arg(34)->Arg(50);
BENCHMARK(BM_RhsSabraCutoff)->Arg(10)->Arg(17);
BENCHMARK(BM_RhsViscous)->Arg(30)->Arg(58);
