#include <benchmark/benchmark.h>

#include "queries.hpp"
#include "support.hpp"

using namespace hwdb;
using namespace hwdb::test;

namespace {

void run(benchmark::State& state, const std::string& query) {
    for (auto _ : state) {
        auto fetcher = fixture_fetcher();
        SessionOptions o;
        o.print_time = false;
        Session s(&fetcher, o);
        auto out = s.execute(query);
        if (out.kind != CommandOutcome::Query) state.SkipWithError(out.text.c_str());
        benchmark::DoNotOptimize(out);
    }
}

}  // namespace

static void BM_BibQuery(benchmark::State& state) { run(state, kBibQuery); }
BENCHMARK(BM_BibQuery)->Unit(benchmark::kMillisecond);

static void BM_Restructuring(benchmark::State& state) { run(state, kRestructuringQuery); }
BENCHMARK(BM_Restructuring)->Unit(benchmark::kMillisecond);

static void BM_HorizontalTC(benchmark::State& state) { run(state, kHorizontalTCQuery); }
BENCHMARK(BM_HorizontalTC)->Unit(benchmark::kMillisecond);

static void BM_LinearOrder(benchmark::State& state) { run(state, kLinearOrderQuery); }
BENCHMARK(BM_LinearOrder)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
