#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hwdb/facts.hpp"
#include "hwdb/wdb.hpp"

namespace hwdb {

enum class Answer { Yes, No, Unknown };

const char* answer_text(Answer a);

// Blocking request/response access to a bisimulation oracle.
class OracleClient {
public:
    virtual ~OracleClient() = default;
    virtual Answer ask(const SetName& x, const SetName& y) = 0;
};

struct BisimStats {
    std::uint64_t calls = 0;
    std::uint64_t rounds = 0;             // saturation rounds run
    std::uint64_t productive_rounds = 0;  // rounds that resolved at least one question
    std::uint64_t rule_evaluations = 0;   // question evaluations
    std::uint64_t questions = 0;          // questions generated
    std::uint64_t asks = 0;
    std::uint64_t postulated = 0;
    std::uint64_t approximation_facts = 0;
};

// What a derivation round changed: classes that gained a negative fact, and whether classes merged.
struct RoundChanges {
    std::unordered_set<NameId> classes;
    bool merged = false;
};

// One saturation pass over open questions whose equations are known: negative and positive rules.
// Resolved questions are removed from open. Returns whether any question was resolved.
// With focus, only questions with an element of each side in a focus class are evaluated; the others
// keep their previous outcome, so focus must cover every class whose facts changed since their last pass.
bool derive_round(std::vector<std::pair<NameId, NameId>>& open, FactStore& facts, const EquationSystem& sys,
                  std::uint64_t* evaluations = nullptr, const std::unordered_set<NameId>* focus = nullptr,
                  RoundChanges* changes = nullptr);

// Lazy bisimulation over a (possibly distributed) WDB.
class Bisimulator {
public:
    Bisimulator(Wdb& wdb, FactStore& facts) : wdb_(wdb), facts_(facts) {}

    void set_oracle(OracleClient* oracle) { oracle_ = oracle; }
    // Loads "<doc>.approximation.xml" next to every document the cache loads.
    void set_use_approximations(bool on);

    bool bisimilar(NameId x, NameId y);
    bool bisimilar(const SetName& x, const SetName& y) { return bisimilar(wdb_.intern(x), wdb_.intern(y)); }

    void load_approximation(const std::string& document_url);

    BisimStats stats;

private:
    // Asks the oracle and records a definite answer; returns whether it was definite.
    bool poll(NameId a, NameId b);

    Wdb& wdb_;
    FactStore& facts_;
    OracleClient* oracle_ = nullptr;
    bool use_approx_ = false;
    std::set<std::string> approx_loaded_;
    std::unordered_set<std::uint64_t> asked_;
};

// Partition refinement on a closed system: block index per name id (defined names only are meaningful).
// Throws if some referenced name is undefined.
std::vector<std::uint32_t> naive_bisimulation(const EquationSystem& sys);

}  // namespace hwdb
