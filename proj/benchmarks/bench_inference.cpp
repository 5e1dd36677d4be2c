#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "cpt/inference.hpp"
#include "cpt/rng.hpp"
#include "cpt/scheduling.hpp"
#include "cpt/transcript.hpp"

namespace {

cpt::Transcript matching_transcript(int n, int rounds, cpt::RngSeed seed,
                                    cpt::Population& pop_out) {
    auto rng = cpt::make_rng(seed);
    pop_out = cpt::random_population(n, n / 5, rng);
    std::vector<int> everyone(n);
    std::iota(everyone.begin(), everyone.end(), 0);
    cpt::Transcript t;
    for (int r = 0; r < rounds; ++r)
        t.add_executed(pop_out, cpt::random_perfect_matching(everyone, rng));
    return t;
}

} // namespace

static void BM_propagate_full(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    cpt::Population pop;
    cpt::Transcript t = matching_transcript(n, 40, 7, pop);
    for (auto _ : state)
        benchmark::DoNotOptimize(cpt::propagate(cpt::KnowledgeState(n), t));
    state.SetItemsProcessed(state.iterations() * t.test_count());
}
BENCHMARK(BM_propagate_full)->Arg(100)->Arg(1000)->Arg(3000);

static void BM_incremental_rounds(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    cpt::Population pop;
    cpt::Transcript t = matching_transcript(n, 40, 11, pop);
    for (auto _ : state) {
        cpt::InferenceEngine engine(n, {});
        for (int r = 0; r < t.round_count(); ++r)
            engine.add_round(t.round(r), t.outcomes(r));
        benchmark::DoNotOptimize(engine.state().unknown_count());
    }
    state.SetItemsProcessed(state.iterations() * t.test_count());
}
BENCHMARK(BM_incremental_rounds)->Arg(100)->Arg(1000)->Arg(3000);
