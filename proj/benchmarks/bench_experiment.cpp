#include <benchmark/benchmark.h>

#include "hwdb/experiment.hpp"

using namespace hwdb;

// Wall-clock cost of simulating one run; the virtual time is reported as a counter.
static void BM_Chains(benchmark::State& state) {
    auto docs = build_scenario(Scenario::Chains);
    const auto strategy = static_cast<Strategy>(state.range(0));
    const double delay = static_cast<double>(state.range(1));
    double millis = 0;
    for (auto _ : state) millis = run_experiment(docs, strategy, delay).millis;
    state.counters["virtual_ms"] = millis;
    state.SetLabel(strategy_name(strategy));
}
BENCHMARK(BM_Chains)
    ->ArgsProduct({{static_cast<int>(Strategy::NoEngine), static_cast<int>(Strategy::Engine)}, {0, 5000, 19000}})
    ->Unit(benchmark::kMillisecond);

static void BM_SelfContained(benchmark::State& state) {
    auto docs = build_scenario(Scenario::SelfContained, static_cast<int>(state.range(1)));
    const auto strategy = static_cast<Strategy>(state.range(0));
    CostModel costs;
    costs.fetch_ms = 50;
    double millis = 0;
    for (auto _ : state) millis = run_experiment(docs, strategy, 0, costs).millis;
    state.counters["virtual_ms"] = millis;
    state.SetLabel(strategy_name(strategy));
}
BENCHMARK(BM_SelfContained)
    ->ArgsProduct({{static_cast<int>(Strategy::NoEngine), static_cast<int>(Strategy::EngineWithApprox)}, {10, 25}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
