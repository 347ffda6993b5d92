#include <benchmark/benchmark.h>

#include "hwdb/bisim.hpp"
#include "support.hpp"

using namespace hwdb;
using namespace hwdb::test;

// Lazy distributed check of every pair against the first name, fresh fact store per iteration.
static void BM_LazyBisimilar(benchmark::State& state) {
    std::mt19937 rng(1);
    auto sys = random_system(rng, static_cast<int>(state.range(0)), 2, 4);
    MemoryFetcher fetcher;
    serve(fetcher, sys);
    for (auto _ : state) {
        Wdb wdb(&fetcher);
        FactStore facts;
        Bisimulator bisim(wdb, facts);
        int yes = 0;
        for (NameId b : sys.defined_names()) yes += bisim.bisimilar(sys.name(0), sys.name(b));
        benchmark::DoNotOptimize(yes);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LazyBisimilar)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void BM_PartitionRefinement(benchmark::State& state) {
    std::mt19937 rng(1);
    auto sys = random_system(rng, static_cast<int>(state.range(0)), 2, 4);
    for (auto _ : state) benchmark::DoNotOptimize(naive_bisimulation(sys));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PartitionRefinement)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

BENCHMARK_MAIN();
