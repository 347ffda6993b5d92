#include "hwdb/bisim.hpp"

#include <algorithm>
#include <map>

#include "hwdb/approx.hpp"

namespace hwdb {

namespace {

std::uint64_t pair_key(NameId a, NameId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Negative rule: some element of u has no label-matching partner in v that is not known distinct.
bool refutes(const FlatExpr& u, const FlatExpr& v, const FactStore& facts) {
    for (const auto& a : u) {
        bool alive = false;
        for (const auto& b : v) {
            if (a.label == b.label && facts.status(a.member, b.member) != Truth::No) {
                alive = true;
                break;
            }
        }
        if (!alive) return true;
    }
    return false;
}

// Positive rule: every element of u has a label-matching partner in v known bisimilar.
bool confirms(const FlatExpr& u, const FlatExpr& v, const FactStore& facts) {
    for (const auto& a : u) {
        bool found = false;
        for (const auto& b : v) {
            if (a.label == b.label && facts.status(a.member, b.member) == Truth::Yes) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace

const char* answer_text(Answer a) {
    switch (a) {
        case Answer::Yes: return "YES";
        case Answer::No: return "NO";
        default: return "UNKNOWN";
    }
}

bool derive_round(std::vector<std::pair<NameId, NameId>>& open, FactStore& facts, const EquationSystem& sys,
                  std::uint64_t* evaluations, const std::unordered_set<NameId>* focus, RoundChanges* changes) {
    auto touches = [&](const FlatExpr& e) {
        for (const auto& el : e)
            if (focus->count(facts.find(el.member))) return true;
        return false;
    };
    bool changed = false;
    std::size_t keep = 0;
    for (std::size_t i = 0; i < open.size(); ++i) {
        auto [u, v] = open[i];
        if (facts.status(u, v) != Truth::Unknown) continue;
        if (!sys.defined(u) || !sys.defined(v)) {
            open[keep++] = open[i];
            continue;
        }
        const FlatExpr& eu = sys.equation(u);
        const FlatExpr& ev = sys.equation(v);
        if (focus && !(touches(eu) && touches(ev))) {
            open[keep++] = open[i];
            continue;
        }
        if (evaluations) ++*evaluations;
        if (refutes(eu, ev, facts) || refutes(ev, eu, facts)) {
            facts.set_no(u, v);
            if (changes) {
                changes->classes.insert(facts.find(u));
                changes->classes.insert(facts.find(v));
            }
            changed = true;
        } else if (confirms(eu, ev, facts) && confirms(ev, eu, facts)) {
            facts.set_yes(u, v);
            if (changes) changes->merged = true;
            changed = true;
        } else {
            open[keep++] = open[i];
        }
    }
    open.resize(keep);
    return changed;
}

void Bisimulator::set_use_approximations(bool on) {
    use_approx_ = on;
    if (on) {
        wdb_.on_document_loaded = [this](const std::string& url) { load_approximation(url); };
        for (const auto& url : wdb_.loaded_documents()) load_approximation(url);
    } else {
        wdb_.on_document_loaded = nullptr;
    }
}

void Bisimulator::load_approximation(const std::string& document_url) {
    if (!approx_loaded_.insert(document_url).second) return;
    auto body = wdb_.try_fetch(approximation_url(document_url));
    if (!body) return;
    for (const auto& f : read_approx_file(*body)) {
        NameId x = wdb_.intern(parse_set_name(f.x, document_url));
        NameId y = wdb_.intern(parse_set_name(f.y, document_url));
        bool changed = f.yes ? facts_.set_yes(x, y) : facts_.set_no(x, y);
        if (changed) ++stats.approximation_facts;
    }
}

bool Bisimulator::bisimilar(NameId x, NameId y) {
    Truth t = facts_.status(x, y);
    if (t != Truth::Unknown) return t == Truth::Yes;
    ++stats.calls;
    EquationSystem& sys = wdb_.sys();

    std::vector<NameId> names;
    std::unordered_set<NameId> in_names;
    std::unordered_set<std::uint64_t> seen_questions;
    std::vector<std::pair<NameId, NameId>> open;
    std::unordered_set<NameId> expanded;

    auto add_question = [&](NameId a, NameId b) {
        if (facts_.status(a, b) != Truth::Unknown) return;
        if (!seen_questions.insert(pair_key(facts_.find(a), facts_.find(b))).second) return;
        open.emplace_back(a, b);
        ++stats.questions;
    };
    auto add_name = [&](NameId n) {
        if (!in_names.insert(n).second) return;
        for (NameId m : names) add_question(m, n);
        names.push_back(n);
    };
    auto prune = [&] {
        open.erase(std::remove_if(open.begin(), open.end(),
                                  [&](const auto& q) { return facts_.status(q.first, q.second) != Truth::Unknown; }),
                   open.end());
    };

    add_name(x);
    add_name(y);
    for (;;) {
        if (oracle_) {
            for (const auto& [a, b] : open) {
                // The root question is re-polled every iteration and every saturation round: answers may upgrade.
                bool root = facts_.find(a) == facts_.find(x) && facts_.find(b) == facts_.find(y);
                if (!asked_.insert(pair_key(a, b)).second && !root) continue;
                poll(a, b);
            }
            prune();
            if (facts_.status(x, y) != Truth::Unknown) break;
        }
        std::set<std::string> to_fetch;
        for (const auto& [a, b] : open) {
            for (NameId n : {a, b})
                if (!sys.defined(n)) to_fetch.insert(sys.name(n).document_url);
        }
        for (const auto& url : to_fetch) {
            if (url == kSessionUrl || wdb_.document_loaded(url))
                throw Error("referenced set name in " + url + " is undefined");
            wdb_.load_document(url);
        }
        prune();
        if (facts_.status(x, y) != Truth::Unknown) break;

        // New names: one level of right-hand sides per iteration.
        const std::size_t level = names.size();
        for (std::size_t i = 0; i < level; ++i) {
            NameId n = names[i];
            if (!sys.defined(n) || !expanded.insert(n).second) continue;
            for (const auto& el : sys.equation(n)) add_name(el.member);
        }

        // After a full round, only questions reading a changed class can change; a merge resets that.
        RoundChanges changes;
        std::unordered_set<NameId> focus;
        bool full = true;
        for (;;) {
            ++stats.rounds;
            changes = {};
            if (!derive_round(open, facts_, sys, &stats.rule_evaluations, full ? nullptr : &focus, &changes)) break;
            ++stats.productive_rounds;
            if (facts_.status(x, y) != Truth::Unknown) break;
            if (oracle_ && poll(x, y)) break;
            full = changes.merged;
            focus = std::move(changes.classes);
        }
        if (facts_.status(x, y) != Truth::Unknown) break;

        bool pending = false;
        for (const auto& [a, b] : open)
            if (!sys.defined(a) || !sys.defined(b)) pending = true;
        for (NameId n : names)
            if (sys.defined(n) && !expanded.count(n)) pending = true;
        if (pending) continue;

        for (const auto& [a, b] : open) {
            if (facts_.status(a, b) == Truth::Unknown) {
                facts_.set_yes(a, b);
                ++stats.postulated;
            }
        }
        break;
    }
    return facts_.status(x, y) == Truth::Yes;
}

bool Bisimulator::poll(NameId a, NameId b) {
    ++stats.asks;
    Answer ans = oracle_->ask(wdb_.sys().name(a), wdb_.sys().name(b));
    if (ans == Answer::Yes) facts_.set_yes(a, b);
    else if (ans == Answer::No) facts_.set_no(a, b);
    return ans != Answer::Unknown;
}

std::vector<std::uint32_t> naive_bisimulation(const EquationSystem& sys) {
    const auto n = sys.name_count();
    for (NameId i : sys.defined_names())
        for (const auto& el : sys.equation(i))
            if (!sys.defined(el.member))
                throw Error("naive bisimulation needs a closed system; " + sys.full_name(el.member) + " is undefined");
    std::vector<std::uint32_t> block(n, 0);
    std::size_t blocks = 1;
    for (;;) {
        std::map<std::pair<std::uint32_t, std::vector<std::pair<LabelId, std::uint32_t>>>, std::uint32_t> sigs;
        std::vector<std::uint32_t> next(n, 0);
        for (NameId i = 0; i < n; ++i) {
            std::vector<std::pair<LabelId, std::uint32_t>> sig;
            if (sys.defined(i))
                for (const auto& el : sys.equation(i)) sig.emplace_back(el.label, block[el.member]);
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            auto [it, _] = sigs.emplace(std::make_pair(block[i], std::move(sig)), static_cast<std::uint32_t>(sigs.size()));
            next[i] = it->second;
        }
        block = std::move(next);
        if (sigs.size() == blocks) break;
        blocks = sigs.size();
    }
    return block;
}

}  // namespace hwdb
