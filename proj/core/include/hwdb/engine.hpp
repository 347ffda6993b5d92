#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "hwdb/bisim.hpp"

namespace hwdb {

struct OracleFact {
    std::string x;
    std::string y;
    bool yes = false;
    std::uint64_t delay_ms = 0;
    bool operator==(const OracleFact&) const = default;
};

// Trivial-oracle file: <oracle><facts set_name=x><fact set_name=y value=yes|no delay=ms/>...
std::vector<OracleFact> read_oracle_file(std::string_view content);
// Groups facts under their first name in first-appearance order.
std::string write_oracle_file(const std::vector<OracleFact>& facts);
// Every unordered pair of declared names of a closed system, decided by naive_bisimulation.
std::vector<OracleFact> oracle_facts(const EquationSystem& sys, std::uint64_t delay_ms = 0);

// Answers purely from a fact file; a fact turns from Unknown into its value delay ms after start.
class TrivialOracle {
public:
    using Clock = std::chrono::steady_clock;

    explicit TrivialOracle(const std::vector<OracleFact>& facts, Clock::time_point start = Clock::now());

    Answer answer(const std::string& x, const std::string& y, std::chrono::milliseconds elapsed) const;
    Answer answer(const std::string& x, const std::string& y) const;

private:
    std::map<std::pair<std::string, std::string>, std::pair<bool, std::uint64_t>> facts_;
    Clock::time_point start_;
};

struct EngineStats {
    std::uint64_t document_fetches = 0;
    std::uint64_t approximation_fetches = 0;
    std::uint64_t approximation_facts = 0;
    std::uint64_t pairs = 0;     // class-representative pairs enumerated after loading
    std::uint64_t resolutions = 0;  // lazy resolutions started by the engine
    std::uint64_t rounds = 0;
    std::uint64_t productive_rounds = 0;
    std::uint64_t evaluations = 0;
    std::uint64_t postulated = 0;
    std::uint64_t published_facts = 0;
    bool loaded = false;
    bool done = false;
};

// Background bisimulation over everything reachable from the root documents, done in small steps: first every
// reachable document is loaded (with its approximation file when enabled), then every undecided pair of names,
// in lexicographic order of full names, is resolved with the lazy algorithm over the engine's own cache.
// step() is the single writer and works privately; publish() makes its facts visible to answer(), which may be
// called concurrently from any thread.
class EngineCore {
public:
    struct Step {
        enum Kind { Fetch, Resolve, Idle } kind = Idle;
        std::uint64_t fetches = 0;
        std::uint64_t evaluations = 0;
    };

    EngineCore(Fetcher* fetcher, std::vector<std::string> root_documents, bool use_approximations);

    Step step(bool publish_now = true);
    void publish();
    void run_to_completion();
    // Published completion, safe from any thread.
    bool done() const;
    // Whether step() has nothing left to do; writer thread only.
    bool idle() const { return work_stats_.done; }

    Answer answer(const std::string& x, const std::string& y) const;
    Answer answer(const SetName& x, const SetName& y) const { return answer(x.full(), y.full()); }
    EngineStats stats() const;

private:
    Step load_next();
    void enumerate_pairs();
    Step resolve_next();

    Wdb wdb_;
    FactStore work_;
    Bisimulator bisim_;
    EngineStats work_stats_;

    std::vector<std::string> queue_;
    std::size_t next_ = 0;
    std::set<std::string> queued_;
    std::vector<std::pair<NameId, NameId>> pairs_;
    std::size_t pair_pos_ = 0;
    std::vector<std::pair<NameId, NameId>> yes_, no_;

    mutable std::shared_mutex mu_;
    std::map<std::string, NameId, std::less<>> ids_;
    FactStore published_;
    EngineStats stats_;
};

// Runs an EngineCore on its own thread until it finishes or is stopped.
class BackgroundEngine {
public:
    explicit BackgroundEngine(EngineCore& core);
    ~BackgroundEngine();

    void stop();
    std::string error() const;

private:
    EngineCore& core_;
    mutable std::mutex mu_;
    std::string error_;
    std::jthread thread_;
};

}  // namespace hwdb
