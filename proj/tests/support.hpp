#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hwdb/fetch.hpp"
#include "hwdb/session.hpp"
#include "hwdb/wdb.hpp"
#include "hwdb/xml_wdb.hpp"

namespace hwdb::test {

inline const std::string kBib = "http://www.csc.liv.ac.uk/~molyneux/t/";

inline std::string fixture(const std::string& file) { return std::string(HWDB_FIXTURES) + "/" + file; }
inline std::string bib(const std::string& file_and_id) { return kBib + file_and_id; }

inline DefaultFetcher fixture_fetcher() {
    DefaultFetcher::Options o;
    o.network = false;
    o.rewrites.emplace_back(kBib, std::string(HWDB_FIXTURES) + "/");
    return DefaultFetcher(std::move(o));
}

// Explicit labelled graph, node 0 is the root when built from a root.
struct Graph {
    std::vector<std::vector<std::pair<std::string, int>>> out;
    std::vector<std::string> names;
    int add(std::string name) {
        out.emplace_back();
        names.push_back(std::move(name));
        return static_cast<int>(out.size()) - 1;
    }
};

// Everything reachable from root, fetching equations through the cache.
inline Graph reachable(Wdb& wdb, NameId root) {
    Graph g;
    std::map<NameId, int> index;
    std::deque<NameId> todo{root};
    index[root] = g.add(wdb.sys().full_name(root));
    while (!todo.empty()) {
        NameId n = todo.front();
        todo.pop_front();
        FlatExpr e = wdb.lookup_equation(n);
        for (const auto& el : e) {
            auto [it, fresh] = index.try_emplace(el.member, 0);
            if (fresh) {
                it->second = g.add(wdb.sys().full_name(el.member));
                todo.push_back(el.member);
            }
            g.out[index[n]].emplace_back(wdb.sys().label_text(el.label), it->second);
        }
    }
    return g;
}

// One node per name id of a closed system.
inline Graph graph_of(const EquationSystem& sys) {
    Graph g;
    for (NameId i = 0; i < sys.name_count(); ++i) g.add(sys.full_name(i));
    for (NameId i = 0; i < sys.name_count(); ++i)
        if (sys.defined(i))
            for (const auto& el : sys.equation(i)) g.out[i].emplace_back(sys.label_text(el.label), static_cast<int>(el.member));
    return g;
}

// Greatest fixpoint by elimination: start from the full relation, drop pairs failing either transfer condition.
inline std::vector<std::vector<char>> bisimulation(const Graph& g, const Graph& h) {
    std::vector<std::vector<char>> r(g.out.size(), std::vector<char>(h.out.size(), 1));
    auto forth = [&](const auto& from, const auto& to, bool flip) {
        for (const auto& [l, a] : from) {
            bool ok = false;
            for (const auto& [m, b] : to)
                if (l == m && (flip ? r[b][a] : r[a][b])) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return true;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < g.out.size(); ++i)
            for (std::size_t j = 0; j < h.out.size(); ++j)
                if (r[i][j] && !(forth(g.out[i], h.out[j], false) && forth(h.out[j], g.out[i], true))) {
                    r[i][j] = 0;
                    changed = true;
                }
    }
    return r;
}

inline bool bisimilar(const Graph& g, int a, const Graph& h, int b) { return bisimulation(g, h)[a][b] != 0; }

// Builds a system from "name = {label:name, ...}" style lists; every name lives under url.
struct SystemBuilder {
    std::string url;
    EquationSystem sys;
    explicit SystemBuilder(std::string u) : url(std::move(u)) {}
    SystemBuilder& def(const std::string& name, const std::vector<std::pair<std::string, std::string>>& elems) {
        std::vector<std::pair<std::string, SetName>> e;
        for (const auto& [l, m] : elems) e.emplace_back(l, SetName{url, m});
        sys.define(SetName{url, name}, e);
        return *this;
    }
    // "X" as {X:{}}.
    SystemBuilder& atoms(const std::vector<std::string>& labels) {
        if (!sys.find(SetName{url, "empty"})) def("empty", {});
        for (const auto& l : labels) def("atom-" + l, {{l, "empty"}});
        return *this;
    }
    NameId id(const std::string& name) { return sys.intern(url, name); }
};

// Random closed system: n names spread over docs documents, up to max_out elements each over labels labels.
inline EquationSystem random_system(std::mt19937& rng, int n, int labels, int docs = 1, int max_out = 3,
                                    const std::string& base = "http://t.example/") {
    EquationSystem sys;
    auto url = [&](int i) { return base + "d" + std::to_string(i % docs) + ".xml"; };
    std::uniform_int_distribution<int> pick(0, n - 1), lab(0, labels - 1), deg(0, max_out);
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<std::string, SetName>> e;
        int k = deg(rng);
        for (int j = 0; j < k; ++j) {
            int m = pick(rng);
            e.emplace_back(std::string(1, static_cast<char>('a' + lab(rng))), SetName{url(m), "x" + std::to_string(m)});
        }
        sys.define(SetName{url(i), "x" + std::to_string(i)}, e);
    }
    return sys;
}

// Every document of a system as XML-WDB text, keyed by URL.
inline std::vector<std::pair<std::string, std::string>> documents_of(const EquationSystem& sys) {
    std::vector<std::string> urls;
    for (NameId i : sys.defined_names())
        if (std::find(urls.begin(), urls.end(), sys.name(i).document_url) == urls.end())
            urls.push_back(sys.name(i).document_url);
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& u : urls) out.emplace_back(u, write_xml_wdb(from_equations(sys, u)));
    return out;
}

// All documents of sys served from memory.
inline void serve(MemoryFetcher& f, const EquationSystem& sys) {
    for (auto& [url, text] : documents_of(sys)) f.put(url, text);
}

// Same hypersets, different representation: shuffled elements, repeated elements, and copies of names
// that some references are redirected to.
inline EquationSystem disguise(const EquationSystem& sys, std::mt19937& rng) {
    std::bernoulli_distribution coin(0.3);
    std::map<NameId, SetName> copy;
    for (NameId i : sys.defined_names())
        if (coin(rng)) copy[i] = SetName{sys.name(i).document_url, sys.name(i).simple + "dup"};
    EquationSystem out;
    auto rewrite = [&](NameId i) {
        std::vector<std::pair<std::string, SetName>> e;
        for (const auto& el : sys.equation(i)) {
            SetName target = sys.name(el.member);
            if (copy.count(el.member) && coin(rng)) target = copy[el.member];
            e.emplace_back(sys.label_text(el.label), target);
            if (coin(rng)) e.emplace_back(sys.label_text(el.label), sys.name(el.member));
        }
        std::shuffle(e.begin(), e.end(), rng);
        return e;
    };
    for (NameId i : sys.defined_names()) {
        out.define(sys.name(i), rewrite(i));
        if (copy.count(i)) out.define(copy[i], rewrite(i));
    }
    return out;
}

inline std::string run_text(Session& s, const std::string& cmd) { return s.execute(cmd).text; }

}  // namespace hwdb::test
