#include <benchmark/benchmark.h>

#include "hwdb/analysis.hpp"
#include "hwdb/parser.hpp"
#include "queries.hpp"

using namespace hwdb;

static void BM_Tokenize(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(tokenize(hwdb::test::kLinearOrderQuery));
}
BENCHMARK(BM_Tokenize);

static void BM_Parse(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(parse(hwdb::test::kLinearOrderQuery));
}
BENCHMARK(BM_Parse);

static void BM_ParseRestructuring(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(parse(hwdb::test::kRestructuringQuery));
}
BENCHMARK(BM_ParseRestructuring);

BENCHMARK_MAIN();
