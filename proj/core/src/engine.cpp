#include "hwdb/engine.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "hwdb/approx.hpp"
#include "hwdb/xml.hpp"

namespace hwdb {

namespace {

const std::string* attr(const XmlNode& n, std::string_view name) {
    for (const auto& a : n.attrs)
        if (a.local == name) return &a.value;
    return nullptr;
}

std::pair<std::string, std::string> ordered(const std::string& x, const std::string& y) {
    return x < y ? std::make_pair(x, y) : std::make_pair(y, x);
}

}  // namespace

std::vector<OracleFact> read_oracle_file(std::string_view content) {
    XmlNode root = parse_xml(content);
    if (root.local != "oracle") throw Error("oracle file root must be oracle");
    std::vector<OracleFact> out;
    for (const auto* group : root.elements()) {
        if (group->local != "facts") throw Error("unexpected element " + group->qname() + " in oracle file");
        const std::string* x = attr(*group, "set_name");
        if (!x) throw Error("facts element without set_name");
        for (const auto* fact : group->elements()) {
            const std::string* y = attr(*fact, "set_name");
            const std::string* v = attr(*fact, "value");
            const std::string* d = attr(*fact, "delay");
            if (fact->local != "fact" || !y || !v || !d || (*v != "yes" && *v != "no"))
                throw Error("malformed fact in oracle file (line " + std::to_string(fact->line) + ")");
            std::uint64_t delay = 0;
            try {
                std::size_t used = 0;
                delay = std::stoull(*d, &used);
                if (used != d->size()) throw std::invalid_argument("trailing characters");
            } catch (const std::logic_error&) {
                throw Error("bad delay \"" + *d + "\" in oracle file (line " + std::to_string(fact->line) + ")");
            }
            out.push_back({*x, *y, *v == "yes", delay});
        }
    }
    return out;
}

std::string write_oracle_file(const std::vector<OracleFact>& facts) {
    std::vector<std::string> groups;
    for (const auto& f : facts)
        if (std::find(groups.begin(), groups.end(), f.x) == groups.end()) groups.push_back(f.x);
    std::ostringstream out;
    out << "<?xml version=\"1.0\"?>\n<oracle>\n\n";
    for (const auto& g : groups) {
        out << "  <facts set_name=\"" << xml_escape(g) << "\">\n";
        for (const auto& f : facts)
            if (f.x == g)
                out << "    <fact delay=\"" << f.delay_ms << "\"\n        set_name=\"" << xml_escape(f.y)
                    << "\" value=\"" << (f.yes ? "yes" : "no") << "\"/>\n";
        out << "  </facts>\n\n";
    }
    out << "</oracle>\n";
    return out.str();
}

std::vector<OracleFact> oracle_facts(const EquationSystem& sys, std::uint64_t delay_ms) {
    auto block = naive_bisimulation(sys);
    std::vector<NameId> declared;
    for (NameId n : sys.defined_names())
        if (!sys.generated(n)) declared.push_back(n);
    std::vector<OracleFact> out;
    for (std::size_t i = 0; i < declared.size(); ++i)
        for (std::size_t j = i + 1; j < declared.size(); ++j)
            out.push_back({sys.full_name(declared[i]), sys.full_name(declared[j]),
                           block[declared[i]] == block[declared[j]], delay_ms});
    return out;
}

TrivialOracle::TrivialOracle(const std::vector<OracleFact>& facts, Clock::time_point start) : start_(start) {
    for (const auto& f : facts) facts_[ordered(f.x, f.y)] = {f.yes, f.delay_ms};
}

Answer TrivialOracle::answer(const std::string& x, const std::string& y, std::chrono::milliseconds elapsed) const {
    if (x == y) return Answer::Yes;
    auto it = facts_.find(ordered(x, y));
    if (it == facts_.end()) return Answer::Unknown;
    if (elapsed.count() < 0 || static_cast<std::uint64_t>(elapsed.count()) < it->second.second) return Answer::Unknown;
    return it->second.first ? Answer::Yes : Answer::No;
}

Answer TrivialOracle::answer(const std::string& x, const std::string& y) const {
    return answer(x, y, std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_));
}

EngineCore::EngineCore(Fetcher* fetcher, std::vector<std::string> root_documents, bool use_approximations)
    : wdb_(fetcher), bisim_(wdb_, work_) {
    for (auto& url : root_documents)
        if (queued_.insert(url).second) queue_.push_back(std::move(url));
    if (use_approximations) bisim_.set_use_approximations(true);
    work_.on_fact = [this](NameId x, NameId y, bool yes) { (yes ? yes_ : no_).emplace_back(x, y); };
}

bool EngineCore::done() const {
    std::shared_lock lock(mu_);
    return stats_.done;
}

EngineStats EngineCore::stats() const {
    std::shared_lock lock(mu_);
    return stats_;
}

Answer EngineCore::answer(const std::string& x, const std::string& y) const {
    if (x == y) return Answer::Yes;
    std::shared_lock lock(mu_);
    auto a = ids_.find(x);
    auto b = ids_.find(y);
    if (a == ids_.end() || b == ids_.end()) return Answer::Unknown;
    switch (published_.peek(a->second, b->second)) {
        case Truth::Yes: return Answer::Yes;
        case Truth::No: return Answer::No;
        default: return Answer::Unknown;
    }
}

void EngineCore::publish() {
    std::unique_lock lock(mu_);
    const auto& sys = wdb_.sys();
    for (NameId n = static_cast<NameId>(ids_.size()); n < sys.name_count(); ++n) ids_.emplace(sys.full_name(n), n);
    for (auto [x, y] : yes_)
        if (published_.set_yes(x, y)) ++work_stats_.published_facts;
    for (auto [x, y] : no_)
        if (published_.set_no(x, y)) ++work_stats_.published_facts;
    yes_.clear();
    no_.clear();
    stats_ = work_stats_;
}

EngineCore::Step EngineCore::step(bool publish_now) {
    Step s;
    if (work_stats_.done) return s;
    if (next_ < queue_.size()) {
        s = load_next();
    } else {
        if (!work_stats_.loaded) enumerate_pairs();
        s = resolve_next();
    }
    if (publish_now) publish();
    return s;
}

void EngineCore::run_to_completion() {
    while (!idle()) step();
}

EngineCore::Step EngineCore::load_next() {
    const std::string url = queue_[next_++];
    const auto before = wdb_.fetch_count();
    const auto approx_before = bisim_.stats.approximation_facts;
    try {
        wdb_.load_document(url);
    } catch (const FetchError&) {
        // Names of an unreachable document stay undefined; pairs involving them stay undecided.
        return {Step::Fetch, wdb_.fetch_count() - before, 0};
    }
    const auto& sys = wdb_.sys();
    for (NameId n : sys.defined_names())
        for (const auto& el : sys.equation(n)) {
            const std::string& target = sys.name(el.member).document_url;
            if (target != kSessionUrl && queued_.insert(target).second) queue_.push_back(target);
        }
    Step s{Step::Fetch, wdb_.fetch_count() - before, 0};
    ++work_stats_.document_fetches;
    work_stats_.approximation_fetches += s.fetches - 1;
    work_stats_.approximation_facts += bisim_.stats.approximation_facts - approx_before;
    return s;
}

void EngineCore::enumerate_pairs() {
    work_stats_.loaded = true;
    const auto& sys = wdb_.sys();
    std::vector<NameId> names(sys.defined_names().begin(), sys.defined_names().end());
    std::sort(names.begin(), names.end(), [&](NameId a, NameId b) { return sys.name(a) < sys.name(b); });
    std::vector<NameId> reps;
    std::unordered_set<NameId> seen;
    for (NameId n : names)
        if (seen.insert(work_.find(n)).second) reps.push_back(n);
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j)
            if (work_.status(reps[i], reps[j]) == Truth::Unknown) pairs_.emplace_back(reps[i], reps[j]);
    work_stats_.pairs = pairs_.size();
}

EngineCore::Step EngineCore::resolve_next() {
    while (pair_pos_ < pairs_.size() && work_.status(pairs_[pair_pos_].first, pairs_[pair_pos_].second) != Truth::Unknown)
        ++pair_pos_;
    if (pair_pos_ == pairs_.size()) {
        work_stats_.done = true;
        return {};
    }
    auto [x, y] = pairs_[pair_pos_++];
    const BisimStats before = bisim_.stats;
    const auto fetches = wdb_.fetch_count();
    try {
        bisim_.bisimilar(x, y);
    } catch (const FetchError&) {
        // Unreachable documents leave the pair undecided.
    } catch (const InternalError&) {
        throw;
    } catch (const Error&) {
        // A dangling reference: the pair stays undecided.
    }
    ++work_stats_.resolutions;
    work_stats_.rounds += bisim_.stats.rounds - before.rounds;
    work_stats_.productive_rounds += bisim_.stats.productive_rounds - before.productive_rounds;
    work_stats_.evaluations += bisim_.stats.rule_evaluations - before.rule_evaluations;
    work_stats_.postulated += bisim_.stats.postulated - before.postulated;
    return {Step::Resolve, wdb_.fetch_count() - fetches, bisim_.stats.rule_evaluations - before.rule_evaluations};
}

BackgroundEngine::BackgroundEngine(EngineCore& core)
    : core_(core), thread_([this](std::stop_token st) {
          try {
              while (!st.stop_requested() && !core_.idle()) core_.step();
          } catch (const std::exception& e) {
              std::lock_guard lock(mu_);
              error_ = e.what();
          }
      }) {}

BackgroundEngine::~BackgroundEngine() { stop(); }

void BackgroundEngine::stop() {
    thread_.request_stop();
    if (thread_.joinable()) thread_.join();
}

std::string BackgroundEngine::error() const {
    std::lock_guard lock(mu_);
    return error_;
}

}  // namespace hwdb
