#include "hwdb/experiment.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "hwdb/approx.hpp"
#include "hwdb/xml_wdb.hpp"

namespace hwdb {

namespace {

constexpr std::string_view kBase = "http://example.org/wdb/";
constexpr std::string_view kCopy = "http://example.org/wdb-copy/";

using Edges = std::vector<std::pair<std::string, SetName>>;

struct Builder {
    std::string prefix;
    EquationSystem sys;
    std::vector<std::string> files;

    std::string url(const std::string& file) const { return prefix + file; }
    SetName name(const std::string& file, const std::string& simple) const { return {url(file), simple}; }
    void define(const std::string& file, const std::string& simple, const Edges& elems) {
        if (std::find(files.begin(), files.end(), file) == files.end()) files.push_back(file);
        sys.define(name(file, simple), elems);
    }
};

// Writes one copy of the WDB under prefix via build.
template <class F>
void emit(ScenarioDocs& out, std::string_view prefix, F&& build) {
    Builder b{std::string(prefix), {}, {}};
    build(b);
    for (const auto& f : b.files) {
        const std::string u = b.url(f);
        std::string text = write_xml_wdb(from_equations(b.sys, u));
        auto doc = load_xml_wdb(text, u);
        auto frag = make_fragment(doc, u);
        out.approximations.emplace_back(approximation_url(u), write_approx_file(frag, simple_approx(frag)));
        out.documents.emplace_back(u, std::move(text));
    }
    out.roots.push_back(b.url(b.files.front()));
}

void chains(Builder& b) {
    const int names = 51;
    auto file_of = [](int i) { return "chain-f" + std::to_string(std::min((i - 1) / 5, 9) + 1) + ".xml"; };
    for (int i = 1; i <= names; ++i) {
        Edges e;
        if (i < names) e.emplace_back("null", b.name(file_of(i + 1), "x" + std::to_string(i + 1)));
        b.define(file_of(i), "x" + std::to_string(i), e);
    }
}

void self_contained(Builder& b, int n) {
    for (int i = 1; i <= n; ++i)
        b.define("self.xml", "x" + std::to_string(i), {{"null", b.name("self.xml", "x" + std::to_string(i % n + 1))}});
}

void three_file(Builder& b) {
    const int main_names = 41, aux_names = 10;
    for (int i = 1; i <= main_names; ++i) {
        Edges e;
        if (i < main_names) {
            e.emplace_back("null", b.name("main.xml", "x" + std::to_string(i + 1)));
        } else {
            e.emplace_back("null", b.name("aux-a.xml", "a1"));
            e.emplace_back("null", b.name("aux-b.xml", "b1"));
        }
        b.define("main.xml", "x" + std::to_string(i), e);
    }
    for (int i = 1; i <= aux_names; ++i) {
        Edges a;
        if (i < aux_names) a.emplace_back("null", b.name("aux-a.xml", "a" + std::to_string(i + 1)));
        b.define("aux-a.xml", "a" + std::to_string(i), a);
        b.define("aux-b.xml", "b" + std::to_string(i),
                 {{"null", b.name("aux-b.xml", "b" + std::to_string(i % aux_names + 1))}});
    }
}

class SimClock {
public:
    SimClock(EngineCore* engine, const CostModel& costs, const SetName& x, const SetName& y)
        : engine_(engine), costs_(costs), x_(x), y_(y) {}

    // Lets the engine work up to virtual time until; its facts become visible only once a step has completed.
    void advance_engine(double until) {
        if (!engine_) return;
        if (pending_) {
            if (engine_time_ > until) return;
            publish();
        }
        while (!engine_->idle() && engine_time_ < until) {
            auto s = engine_->step(false);
            engine_time_ += static_cast<double>(s.fetches) * costs_.fetch_ms +
                            static_cast<double>(s.evaluations) * costs_.evaluation_ms;
            if (engine_time_ > until) {
                pending_ = true;
                return;
            }
            publish();
        }
    }

    double now = 0;
    bool root_known = false;
    double root_ms = 0;
    std::uint64_t root_rounds = 0;

private:
    void publish() {
        pending_ = false;
        engine_->publish();
        if (!root_known && engine_->answer(x_, y_) != Answer::Unknown) {
            root_known = true;
            root_ms = engine_time_;
            root_rounds = engine_->stats().productive_rounds;
        }
    }

    EngineCore* engine_;
    const CostModel& costs_;
    SetName x_, y_;
    double engine_time_ = 0;
    bool pending_ = false;
};

class SimFetcher : public Fetcher {
public:
    SimFetcher(MemoryFetcher& docs, std::function<void()> before) : docs_(docs), before_(std::move(before)) {}
    std::string fetch(const std::string& url) override {
        before_();
        return docs_.fetch(url);
    }

private:
    MemoryFetcher& docs_;
    std::function<void()> before_;
};

class SimOracle : public OracleClient {
public:
    SimOracle(EngineCore& engine, std::function<void()> before) : engine_(engine), before_(std::move(before)) {}
    Answer ask(const SetName& x, const SetName& y) override {
        before_();
        ++asks;
        return engine_.answer(x, y);
    }
    std::uint64_t asks = 0;

private:
    EngineCore& engine_;
    std::function<void()> before_;
};

}  // namespace

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Chains: return "chains";
        case Scenario::SelfContained: return "self_contained";
        default: return "three_file";
    }
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::NoEngine: return "no_engine";
        case Strategy::Engine: return "engine";
        default: return "engine_with_approx";
    }
}

ScenarioDocs build_scenario(Scenario s, int n) {
    if (s == Scenario::SelfContained && n < 1) throw Error("self_contained scenario needs n >= 1");
    ScenarioDocs out;
    for (auto prefix : {kBase, kCopy}) {
        emit(out, prefix, [&](Builder& b) {
            switch (s) {
                case Scenario::Chains: chains(b); break;
                case Scenario::SelfContained: self_contained(b, n); break;
                case Scenario::ThreeFile: three_file(b); break;
            }
        });
    }
    const std::string root_file = s == Scenario::Chains ? "chain-f1.xml" : s == Scenario::SelfContained ? "self.xml" : "main.xml";
    out.x = {std::string(kBase) + root_file, "x1"};
    out.x_copy = {std::string(kCopy) + root_file, "x1"};
    return out;
}

ExperimentResult run_experiment(const ScenarioDocs& docs, Strategy strategy, double delay_ms, const CostModel& costs) {
    MemoryFetcher store;
    for (const auto& [u, body] : docs.documents) store.put(u, body);
    for (const auto& [u, body] : docs.approximations) store.put(u, body);

    std::optional<EngineCore> engine;
    if (strategy != Strategy::NoEngine)
        engine.emplace(&store, docs.roots, strategy == Strategy::EngineWithApprox);
    SimClock clock(engine ? &*engine : nullptr, costs, docs.x, docs.x_copy);

    const double start = strategy == Strategy::NoEngine ? 0 : delay_ms;
    clock.advance_engine(start);
    clock.now = start;

    const BisimStats* client_stats = nullptr;
    std::uint64_t counted = 0;
    auto sync = [&] {
        if (!client_stats) return;
        clock.now += static_cast<double>(client_stats->rule_evaluations - counted) * costs.evaluation_ms;
        counted = client_stats->rule_evaluations;
    };
    SimFetcher fetcher(store, [&] {
        sync();
        clock.now += costs.fetch_ms;
        clock.advance_engine(clock.now);
    });
    Wdb wdb(&fetcher);
    FactStore facts;
    Bisimulator bisim(wdb, facts);
    client_stats = &bisim.stats;
    std::optional<SimOracle> oracle;
    if (engine) {
        oracle.emplace(*engine, [&] {
            sync();
            clock.now += costs.round_trip_ms;
            clock.advance_engine(clock.now);
        });
        bisim.set_oracle(&*oracle);
    }

    ExperimentResult r;
    r.bisimilar = bisim.bisimilar(docs.x, docs.x_copy);
    sync();
    r.millis = clock.now - start;
    r.client_fetches = wdb.fetch_count();
    r.client_evaluations = bisim.stats.rule_evaluations;
    r.client_postulated = bisim.stats.postulated;
    r.asks = oracle ? oracle->asks : 0;
    r.client = bisim.stats;
    if (engine) {
        r.engine = engine->stats();
        r.engine_decided_root = clock.root_known;
        r.engine_root_ms = clock.root_ms;
        r.engine_rounds_at_root = clock.root_rounds;
    }
    return r;
}

}  // namespace hwdb
