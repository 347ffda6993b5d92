#pragma once

#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hwdb/bisim.hpp"
#include "hwdb/parser.hpp"

namespace hwdb {

struct QueryResult {
    bool boolean = false;
    bool truth = false;
    NameId root = 0;  // set queries: the result name, defined in the session store
};

struct EvalStats {
    std::uint64_t equations = 0;       // fresh session equations created
    std::uint64_t formula_evals = 0;
    std::uint64_t recursion_passes = 0;
};

// Label wildcard semantics: 'x*' prefix, '*x' suffix, '*x*' substring, plain text equality.
bool wildcard_match(std::string_view text, std::string_view pattern, bool lead, bool trail);

// Evaluates analysed query trees over a session WDB; equality is bisimulation.
class Evaluator {
public:
    Evaluator(Wdb& wdb, Bisimulator& bisim);

    // pr must have passed analyze(); its root is a query command.
    QueryResult run(const ParseResult& pr);

    EvalStats stats;

private:
    struct Binding {
        NameId set = 0;
        LabelId label = 0;
    };
    struct FlatHash {
        std::size_t operator()(const FlatExpr& e) const;
    };

    NameId term(const Node* t);
    NameId term_inner(const Node* n);
    bool formula(const Node* f);
    bool formula_inner(const Node* n);

    LabelId label(const Node* l);
    bool bind_pair(const Node* vp, const Elem& e);
    NameId constant(const Node* decl);
    std::vector<Binding> arguments(const Node* call);
    std::vector<Binding> save(const std::vector<const Node*>& idns);
    void restore(const std::vector<const Node*>& idns, const std::vector<Binding>& saved);
    static std::vector<const Node*> pair_idns(const Node* vp);

    // Binds the declaration's parameters to args while f runs.
    template <class F>
    auto with_params(const Node* qdecl, const std::vector<Binding>& args, F&& f) {
        std::vector<const Node*> idns;
        if (qdecl->kid(4)->cat == Cat::Variables)
            for (const auto& v : qdecl->kid(4)->kids)
                if (!v->is_leaf()) idns.push_back(v->kid(1));
        auto saved = save(idns);
        for (std::size_t i = 0; i < idns.size(); ++i) slot(idns[i]) = args[i];
        auto r = f();
        restore(idns, saved);
        return r;
    }
    bool label_equality(const Node* lhs, const Node* rhs);
    bool member(LabelId l, NameId a, NameId b);

    NameId collect(const Node* n);
    NameId separate(const Node* n);
    NameId recursion(const Node* n);
    NameId tc(NameId a);
    NameId decorate(NameId g, NameId v);

    NameId make(FlatExpr e);
    FlatExpr eq(NameId id) { return wdb_.lookup_equation(id); }
    Binding& slot(const Node* idn);

    Wdb& wdb_;
    Bisimulator& bisim_;
    std::vector<Binding> env_;
    std::unordered_map<const Node*, NameId> constants_;
    std::unordered_map<FlatExpr, NameId, FlatHash> interned_;
    ParseResult internal_;
    const Node* regroup_ = nullptr;
};

}  // namespace hwdb
