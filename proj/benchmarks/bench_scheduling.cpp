#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "cpt/rng.hpp"
#include "cpt/scheduling.hpp"

static void BM_random_matching(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<int> everyone(n);
    std::iota(everyone.begin(), everyone.end(), 0);
    auto rng = cpt::make_rng(42);
    for (auto _ : state)
        benchmark::DoNotOptimize(cpt::random_perfect_matching(everyone, rng));
    state.SetItemsProcessed(state.iterations() * n / 2);
}
BENCHMARK(BM_random_matching)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_round_robin(benchmark::State& state) {
    const int s = static_cast<int>(state.range(0));
    std::vector<int> bin(s);
    std::iota(bin.begin(), bin.end(), 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(cpt::round_robin_schedule(bin));
    state.SetItemsProcessed(state.iterations() * s * (s - 1) / 2);
}
BENCHMARK(BM_round_robin)->Arg(10)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
