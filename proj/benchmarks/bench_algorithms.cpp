#include <benchmark/benchmark.h>

#include "cpt/adaptive.hpp"
#include "cpt/bounded.hpp"
#include "cpt/rng.hpp"
#include "cpt/types.hpp"

static void BM_adaptive_known(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto rng = cpt::make_rng(5);
    cpt::Population pop = cpt::random_population(n, n / 5, rng);
    cpt::RngSeed seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(cpt::identify_all_known_eps(pop, 0.2, seed++));
}
BENCHMARK(BM_adaptive_known)->Arg(100)->Arg(500);

static void BM_adaptive_unknown(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto rng = cpt::make_rng(6);
    cpt::Population pop = cpt::random_population(n, n / 5, rng);
    cpt::RngSeed seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(cpt::identify_all_unknown_eps(pop, seed++));
}
BENCHMARK(BM_adaptive_unknown)->Arg(100)->Arg(500);

static void BM_bounded_five_round(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto rng = cpt::make_rng(7);
    cpt::Population pop = cpt::random_population(n, n / 2, rng);
    cpt::RngSeed seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(cpt::identify_bounded(pop, 0.5, seed++));
}
BENCHMARK(BM_bounded_five_round)->Arg(100)->Arg(1000);
