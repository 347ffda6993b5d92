#include "hwdb/forks.hpp"

#include <functional>
#include <tuple>

namespace hwdb {

namespace {

Pattern C(Cat c) {
    Pattern p;
    p.sym.is_cat = true;
    p.sym.cat = c;
    return p;
}
Pattern T(Tok t) {
    Pattern p;
    p.sym.tok = t;
    return p;
}
Pattern W(const char* w) {
    Pattern p;
    p.sym.tok = Tok::Word;
    p.sym.word = w;
    return p;
}
Pattern group(Pattern::Kind k, std::vector<Pattern> kids) {
    Pattern p;
    p.kind = k;
    p.kids = std::move(kids);
    return p;
}
Pattern seq(std::vector<Pattern> kids) { return group(Pattern::Seq, std::move(kids)); }
Pattern alt(std::vector<Pattern> kids) { return group(Pattern::Alt, std::move(kids)); }
Pattern opt(Pattern p) { return group(Pattern::Opt, {std::move(p)}); }
Pattern star(Pattern p) { return group(Pattern::Star, {std::move(p)}); }
Pattern plus(Pattern p) { return group(Pattern::Plus, {std::move(p)}); }
Pattern list_of(Pattern item) { return seq({item, star(seq({W(","), item}))}); }

std::vector<Fork> build() {
    using enum Cat;
    const Pattern be = alt({W("be"), W("=")});
    const Pattern in = alt({W("in"), W("<-")});
    const Pattern where = alt({W("where"), W("|")});
    const Pattern uni = alt({W("U"), W("union")});
    const Pattern term = C(DeltaTerm);
    const Pattern formula = C(DeltaFormula);
    const Pattern params = opt(list_of(alt({C(DeltaTerm), C(Label)})));
    const Pattern label_ident = alt({C(LabelVariable), C(LabelConstant)});
    auto quantifier = [&](const char* kw) { return seq({W(kw), C(VariablePair), in, term, opt(W("."))}); };

    std::vector<Fork> t;
    auto add = [&](Cat root, Pattern p, bool ident = false) { t.push_back({root, std::move(p), ident}); };

    add(TopLevelCommand, alt({seq({W("library"), C(LibraryCommand), W(";")}), seq({C(Query), W(";")}),
                              seq({W("exit"), W(";")})}));
    add(LibraryCommand, alt({seq({W("add"), C(Declarations)}), seq({W("list"), opt(W("verbose"))})}));
    add(Query, alt({seq({W("boolean"), W("query"), formula}), seq({W("set"), W("query"), term})}));
    add(Declarations,
        list_of(alt({C(SetConstantDecl), C(LabelConstantDecl), C(SetQueryDecl), C(BooleanQueryDecl)})));
    add(SetConstantDecl, seq({W("set"), W("constant"), C(SetConstant), be, term}));
    add(LabelConstantDecl, seq({W("label"), W("constant"), C(LabelConstant), be, C(LabelValue)}));
    add(SetQueryDecl, seq({W("set"), W("query"), C(SetQueryName), W("("), opt(C(Variables)), W(")"), be, term}));
    add(BooleanQueryDecl,
        seq({W("boolean"), W("query"), C(BooleanQueryName), W("("), opt(C(Variables)), W(")"), be, formula}));
    add(Variables, list_of(C(Variable)));
    add(Variable, alt({seq({W("set"), C(SetVariable)}), seq({W("label"), C(LabelVariable)})}));
    for (Cat c : {SetQueryName, BooleanQueryName, SetVariable, SetConstant, LabelVariable, LabelConstant})
        add(c, T(Tok::Ident), true);

    add(DeltaTerm, alt({C(SetVariable), C(SetConstant), C(SetName), C(AtomicValue), C(Enumerate), C(Union),
                        seq({W("("), C(MultipleUnion), W(")")}), C(Collect), C(Separate), C(TransitiveClosure),
                        C(Recursion), C(Decoration), C(IfElseTerm), C(SetQueryCall), C(TermWithDecls)}));
    add(SetName, T(Tok::SetNameLit));
    add(AtomicValue, T(Tok::Atom));
    add(Enumerate, seq({W("{"), opt(C(LabelledTerms)), W("}")}));
    add(Union, seq({uni, term}));
    add(MultipleUnion, seq({term, star(seq({uni, term}))}));
    add(Collect, seq({W("collect"), W("{"), C(LabelledTerm), where, C(VariablePair), in, term,
                      opt(seq({W("and"), formula})), W("}")}));
    add(Separate, seq({W("separate"), W("{"), C(VariablePair), in, term, where, formula, W("}")}));
    add(TransitiveClosure, seq({alt({W("tc"), W("TC"), W("transitiveclosure")}), term}));
    add(Recursion, seq({W("recursion"), C(SetVariable), W("{"), C(VariablePair), in, term, where, formula, W("}")}));
    add(Decoration, seq({W("decorate"), W("("), term, W(","), term, W(")")}));
    add(IfElseTerm, seq({W("if"), formula, W("then"), term, W("else"), term, W("fi")}));
    add(SetQueryCall, seq({W("call"), C(SetQueryName), W("("), params, W(")")}));
    add(TermWithDecls, seq({W("let"), C(Declarations), W("in"), term, W("endlet")}));

    add(DeltaFormula,
        alt({C(SetEquality), C(LabelEquality), C(LabelRelationship), C(Membership), C(BooleanQueryCall),
             W("true"), W("false"),
             seq({W("("), alt({C(Conjunction), C(Disjunction), C(QuasiImplication), formula}), W(")")}),
             C(QuantifiedFormula), C(NegatedFormula), C(IfElseFormula), C(FormulaWithDecls)}));
    add(SetEquality, seq({term, W("="), term}));
    add(LabelEquality, alt({seq({C(Label), W("="), C(Label)}), seq({C(Label), W("="), C(WildcardLabel)}),
                            seq({C(WildcardLabel), W("="), C(Label)})}));
    add(WildcardLabel, alt({T(Tok::QWild), seq({W("*"), label_ident, opt(W("*"))}), seq({label_ident, W("*")})}));
    add(LabelRelationship, seq({C(Label), alt({W("<"), W(">"), W("<="), W(">=")}), C(Label)}));
    add(Membership, seq({C(LabelledTerm), in, term}));
    add(BooleanQueryCall, seq({W("call"), C(BooleanQueryName), W("("), params, W(")")}));
    add(IfElseFormula, seq({W("if"), formula, W("then"), formula, W("else"), formula, W("fi")}));
    add(FormulaWithDecls, seq({W("let"), C(Declarations), W("in"), formula, W("endlet")}));
    add(Conjunction, seq({formula, plus(seq({W("and"), formula}))}));
    add(Disjunction, seq({formula, plus(seq({W("or"), formula}))}));
    add(QuasiImplication,
        seq({formula, plus(seq({alt({W("<="), W("=>"), W("implies"), W("iff"), W("<=>")}), formula}))}));
    add(QuantifiedFormula, alt({seq({C(Forall), formula}), seq({C(Exists), formula})}));
    add(Forall, quantifier("forall"));
    add(Exists, quantifier("exists"));
    add(NegatedFormula, seq({W("not"), formula}));
    add(Label, alt({C(LabelVariable), C(LabelValue), C(LabelConstant)}));
    add(LabelValue, T(Tok::QLabel));
    add(LabelledTerms, list_of(C(LabelledTerm)));
    add(LabelledTerm, seq({C(Label), W(":"), term}));
    add(VariablePair, seq({alt({C(LabelVariable), C(LabelValue)}), W(":"), C(SetVariable)}));
    return t;
}

bool sym_matches(const ForkSymbol& pat, const ForkSymbol& s) {
    if (pat.is_cat != s.is_cat) return false;
    if (pat.is_cat) return pat.cat == s.cat;
    if (pat.tok != s.tok) return false;
    return pat.tok != Tok::Word || pat.word == s.word;
}

using Cont = std::function<bool(std::size_t)>;

bool match(const Pattern& p, const std::vector<ForkSymbol>& s, std::size_t i, const Cont& k) {
    switch (p.kind) {
        case Pattern::Sym:
            return i < s.size() && sym_matches(p.sym, s[i]) && k(i + 1);
        case Pattern::Seq: {
            std::function<bool(std::size_t, std::size_t)> step = [&](std::size_t j, std::size_t pos) -> bool {
                if (j == p.kids.size()) return k(pos);
                return match(p.kids[j], s, pos, [&](std::size_t next) { return step(j + 1, next); });
            };
            return step(0, i);
        }
        case Pattern::Alt:
            for (const auto& kid : p.kids)
                if (match(kid, s, i, k)) return true;
            return false;
        case Pattern::Opt:
            return match(p.kids[0], s, i, k) || k(i);
        case Pattern::Star:
            return match(p.kids[0], s, i, [&](std::size_t j) { return j > i && match(p, s, j, k); }) || k(i);
        case Pattern::Plus: {
            Pattern rest = p;
            rest.kind = Pattern::Star;
            return match(p.kids[0], s, i, [&](std::size_t j) { return match(rest, s, j, k); });
        }
    }
    return false;
}

std::vector<std::vector<ForkSymbol>> expand(const Pattern& p, int max_repeat) {
    using Seqs = std::vector<std::vector<ForkSymbol>>;
    auto concat = [](const Seqs& a, const Seqs& b) {
        Seqs out;
        for (const auto& x : a)
            for (const auto& y : b) {
                auto z = x;
                z.insert(z.end(), y.begin(), y.end());
                out.push_back(std::move(z));
            }
        return out;
    };
    switch (p.kind) {
        case Pattern::Sym: return {{p.sym}};
        case Pattern::Seq: {
            Seqs acc{{}};
            for (const auto& kid : p.kids) acc = concat(acc, expand(kid, max_repeat));
            return acc;
        }
        case Pattern::Alt: {
            Seqs out;
            for (const auto& kid : p.kids) {
                auto e = expand(kid, max_repeat);
                out.insert(out.end(), e.begin(), e.end());
            }
            return out;
        }
        case Pattern::Opt: {
            Seqs out{{}};
            auto e = expand(p.kids[0], max_repeat);
            out.insert(out.end(), e.begin(), e.end());
            return out;
        }
        case Pattern::Star:
        case Pattern::Plus: {
            auto one = expand(p.kids[0], max_repeat);
            Seqs out;
            if (p.kind == Pattern::Star) out.push_back({});
            Seqs cur{{}};
            for (int r = 1; r <= max_repeat; ++r) {
                cur = concat(cur, one);
                out.insert(out.end(), cur.begin(), cur.end());
            }
            return out;
        }
    }
    return {};
}

}  // namespace

ForkSymbol ForkSymbol::of(const Node& n) {
    ForkSymbol s;
    if (!n.is_leaf()) {
        s.is_cat = true;
        s.cat = n.cat;
        return s;
    }
    s.tok = n.tok;
    if (n.tok == Tok::Word) s.word = n.text;
    return s;
}

bool ForkSymbol::operator<(const ForkSymbol& o) const {
    return std::tie(is_cat, cat, tok, word) < std::tie(o.is_cat, o.cat, o.tok, o.word);
}

std::string ForkSymbol::text() const {
    if (is_cat) return std::string(cat_name(cat));
    switch (tok) {
        case Tok::Ident: return "IDENTIFIER";
        case Tok::SetNameLit: return "SET-NAME";
        case Tok::Atom: return "ATOM";
        case Tok::QLabel: return "LABEL";
        case Tok::QWild: return "WILDCARD";
        case Tok::End: return "END";
        default: return "\"" + word + "\"";
    }
}

const std::vector<Fork>& fork_table() {
    static const std::vector<Fork> table = build();
    return table;
}

std::vector<Cat> lookup_roots(const std::vector<ForkSymbol>& children) {
    std::vector<Cat> out;
    for (const auto& f : fork_table())
        if (match(f.pattern, children, 0, [&](std::size_t j) { return j == children.size(); })) out.push_back(f.root);
    return out;
}

std::vector<Cat> lookup_roots(const Node& n) {
    std::vector<ForkSymbol> syms;
    syms.reserve(n.size());
    for (const auto& k : n.kids) syms.push_back(ForkSymbol::of(*k));
    return lookup_roots(syms);
}

std::vector<std::vector<ForkSymbol>> expand_fork(const Fork& f, int max_repeat) {
    return expand(f.pattern, max_repeat);
}

}  // namespace hwdb
