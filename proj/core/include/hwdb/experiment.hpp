#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hwdb/engine.hpp"

namespace hwdb {

enum class Scenario { Chains, SelfContained, ThreeFile };
enum class Strategy { NoEngine, Engine, EngineWithApprox };

const char* scenario_name(Scenario s);
const char* strategy_name(Strategy s);

// A WDB plus its isomorphic copy (same documents under a different URL prefix).
struct ScenarioDocs {
    std::vector<std::pair<std::string, std::string>> documents;  // url -> XML-WDB text
    std::vector<std::pair<std::string, std::string>> approximations;
    std::vector<std::string> roots;  // document URLs, both copies
    SetName x;
    SetName x_copy;
};

// chains: 51 names over 10 files linked in one chain ending in {}.
// self_contained: one file holding a cycle of n names, no external links.
// three_file: a main file linking two auxiliary files, 61 names in total.
ScenarioDocs build_scenario(Scenario s, int n = 0);

// Simulated costs in virtual milliseconds.
struct CostModel {
    double fetch_ms = 500;
    double evaluation_ms = 0.05;
    double round_trip_ms = 0.5;
};

struct ExperimentResult {
    double millis = 0;  // client time from its start to the decision
    bool bisimilar = false;
    std::uint64_t client_fetches = 0;
    std::uint64_t client_evaluations = 0;
    std::uint64_t client_postulated = 0;
    std::uint64_t asks = 0;
    BisimStats client;
    EngineStats engine;
    bool engine_decided_root = false;
    double engine_root_ms = 0;                // engine time at which it knew the root pair
    std::uint64_t engine_rounds_at_root = 0;  // productive derivation rounds before that
};

// Engine starts at virtual time 0, the client asks x ? x' at time delay_ms. Deterministic.
ExperimentResult run_experiment(const ScenarioDocs& docs, Strategy strategy, double delay_ms,
                                const CostModel& costs = {});

}  // namespace hwdb
