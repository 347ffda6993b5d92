#include "hwdb/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "hwdb/forks.hpp"

namespace hwdb {

namespace {

bool is_binder(const Node* n) {
    switch (n->cat) {
        case Cat::Collect:
        case Cat::Separate:
        case Cat::Recursion:
        case Cat::QuantifiedFormula:
        case Cat::TermWithDecls:
        case Cat::FormulaWithDecls:
        case Cat::SetQueryDecl:
        case Cat::BooleanQueryDecl: return true;
        default: return false;
    }
}

bool is_declaration(const Node* n) {
    switch (n->cat) {
        case Cat::SetConstantDecl:
        case Cat::LabelConstantDecl:
        case Cat::SetQueryDecl:
        case Cat::BooleanQueryDecl: return true;
        default: return false;
    }
}

void pair_idns(Node* vp, std::vector<Node*>& out) {
    if (vp->kid(0)->cat == Cat::LabelVariable) out.push_back(vp->kid(0));
    out.push_back(vp->kid(2));
}

// IDNs of binder visible from its child `from` (and, for lets, from declaration `from_decl`), in binding order.
std::vector<Node*> visible_idns(Node* binder, const Node* from, const Node* from_decl) {
    std::vector<Node*> out;
    switch (binder->cat) {
        case Cat::Collect: pair_idns(binder->kid(4), out); break;
        case Cat::Separate: pair_idns(binder->kid(2), out); break;
        case Cat::Recursion:
            out.push_back(binder->kid(1));
            pair_idns(binder->kid(3), out);
            break;
        case Cat::QuantifiedFormula: pair_idns(binder->kid(0)->kid(1), out); break;
        case Cat::TermWithDecls:
        case Cat::FormulaWithDecls: {
            Node* decls = binder->kid(1);
            for (auto& d : decls->kids) {
                if (d->is_leaf()) continue;
                if (from == decls && d.get() == from_decl) break;
                out.push_back(d->kid(2));
            }
            break;
        }
        case Cat::SetQueryDecl:
        case Cat::BooleanQueryDecl:
            if (from == binder->kids.back().get() && binder->kid(4)->cat == Cat::Variables)
                for (auto& v : binder->kid(4)->kids)
                    if (!v->is_leaf()) out.push_back(v->kid(1));
            break;
        default: break;
    }
    return out;
}

bool is_ancestor(const Node* a, const Node* n) {
    for (; n; n = n->parent)
        if (n == a) return true;
    return false;
}

void occurrences(Node* n, std::vector<Node*>& out) {
    if (is_identifier_cat(n->cat) && !n->idn) out.push_back(n);
    for (auto& k : n->kids) occurrences(k.get(), out);
}

template <class F>
void walk(Node* n, F&& f) {
    f(n);
    for (auto& k : n->kids) walk(k.get(), f);
}

Diagnostic diag(const Node* n, std::string msg) { return {n->begin, n->end, std::move(msg)}; }

bool is_variable_idn(const Node* d) { return d->cat == Cat::SetVariable || d->cat == Cat::LabelVariable; }

void check_params(Node* call, std::vector<Diagnostic>& errs) {
    Node* name = call->kid(1);
    if (!name->decl || (name->decl->cat != Cat::SetQueryName && name->decl->cat != Cat::BooleanQueryName)) return;
    Node* qdecl = name->decl->parent;
    std::vector<Node*> declared;
    if (qdecl->kid(4)->cat == Cat::Variables)
        for (auto& v : qdecl->kid(4)->kids)
            if (!v->is_leaf()) declared.push_back(v.get());
    std::vector<Node*> actual;
    for (std::size_t i = 3; i + 1 < call->size(); ++i)
        if (!call->kid(i)->is_word(",")) actual.push_back(call->kid(i));
    if (declared.size() != actual.size()) {
        errs.push_back(diag(call, "query " + name->ident() + " expects " + std::to_string(declared.size()) +
                                      " parameter(s) but is called with " + std::to_string(actual.size())));
        return;
    }
    for (std::size_t i = 0; i < actual.size(); ++i) {
        Node* p = actual[i];
        bool want_label = declared[i]->kid(0)->text == "label";
        if (want_label && p->cat == Cat::DeltaTerm && p->size() == 1 &&
            (p->kid(0)->cat == Cat::LabelVariable || p->kid(0)->cat == Cat::LabelConstant))
            p->cat = Cat::Label;
        if (want_label != (p->cat == Cat::Label)) {
            errs.push_back(diag(p, "parameter " + std::to_string(i + 1) + " of query " + name->ident() + " must be a " +
                                       (want_label ? "label" : "set")));
            continue;
        }
        p->correct = true;
    }
}

}  // namespace

DeclTriple ids_search(Node* occ) {
    const std::string& name = occ->ident();
    const Node* prev = occ;
    const Node* prev2 = nullptr;
    for (Node* n = occ->parent; n; prev2 = prev, prev = n, n = n->parent) {
        if (!is_binder(n)) continue;
        auto v = visible_idns(n, prev, prev2);
        for (auto it = v.rbegin(); it != v.rend(); ++it)
            if ((*it)->ident() == name) return {n, *it, occ};
    }
    return {nullptr, nullptr, occ};
}

std::vector<Diagnostic> scr_relabel(Node& root) {
    std::vector<Diagnostic> errs;
    std::function<bool(Node&)> go = [&](Node& n) -> bool {
        if (n.is_leaf() || is_identifier_cat(n.cat)) {
            n.seen = n.correct = true;
            return true;
        }
        for (auto& k : n.kids)
            if (!go(*k)) return false;
        auto roots = lookup_roots(n);
        bool fits = std::find(roots.begin(), roots.end(), n.cat) != roots.end();
        if (n.correct && !fits) {
            errs.push_back(diag(&n, std::string(cat_name(n.cat)) + " conflicts with the expected syntax: " + reprint(n)));
            return false;
        }
        if (!fits) {
            if (roots.size() != 1) {
                errs.push_back(diag(&n, "cannot be properly typed: " + reprint(n)));
                return false;
            }
            n.cat = roots.front();
        }
        n.seen = n.correct = true;
        return true;
    };
    go(root);
    return errs;
}

Analysis analyze(ParseResult& pr, int slot_base) {
    Analysis a;
    std::map<const Node*, Node*> binder_of;

    for (Node* in : pr.identifier_nodes) {
        auto t = ids_search(in);
        if (!t.decl) {
            std::string msg = "occurrence of identifier name " + in->ident() + " not declared";
            for (Node* n = in->parent; n; n = n->parent)
                if (is_declaration(n) && n->kid(2)->ident() == in->ident()) {
                    msg = "recursive use of " + in->ident() + " within its own declaration is not allowed";
                    break;
                }
            a.errors.push_back(diag(in, msg));
            continue;
        }
        in->decl = t.decl;
        binder_of[in] = t.binder;
    }
    if (!a.errors.empty()) {
        a.undeclared = true;
        return a;
    }

    for (Node* in : pr.identifier_nodes) in->cat = in->decl->cat;

    walk(pr.tree.get(), [&](Node* n) {
        if (n->cat == Cat::SetQueryCall || n->cat == Cat::BooleanQueryCall) check_params(n, a.errors);
    });
    if (!a.errors.empty()) return a;

    a.errors = scr_relabel(*pr.tree);
    if (!a.errors.empty()) return a;

    for (auto& [bt, ins] : pr.btflvn_sublists) {
        const Node* binder = bt->parent;
        if (!binder || binder->cat == Cat::Declarations) continue;
        if (binder->cat == Cat::Forall || binder->cat == Cat::Exists) binder = binder->parent;
        for (Node* in : ins)
            if (binder_of[in] == binder)
                a.errors.push_back(diag(in, "identifier " + in->ident() + " may not occur in the range of its own binder"));
    }

    auto check_free = [&](Node* scope, const Node* owner, const std::string& what) {
        std::vector<Node*> ins;
        occurrences(scope, ins);
        for (Node* in : ins)
            if (in->decl && is_variable_idn(in->decl) && !is_ancestor(owner, in->decl))
                a.errors.push_back(diag(in, "free variable " + in->ident() + " in " + what));
    };
    walk(pr.tree.get(), [&](Node* n) {
        if (n->cat == Cat::SetConstantDecl)
            check_free(n->kid(4), n, "definition of constant " + n->kid(2)->ident());
        else if (n->cat == Cat::SetQueryDecl || n->cat == Cat::BooleanQueryDecl)
            check_free(n->kids.back().get(), n, "body of query " + n->kid(2)->ident() + " is not a parameter");
    });
    if (!a.errors.empty()) return a;

    int next = slot_base;
    walk(pr.tree.get(), [&](Node* n) {
        if (n->idn) n->slot = next++;
    });
    a.slots = next - slot_base;
    return a;
}

std::optional<std::uint32_t> WrappedQuery::map_back(std::uint32_t pos) const {
    if (pos < body_begin) return pos;
    if (pos < body_begin + prefix_len) return std::nullopt;
    std::uint32_t p = pos - prefix_len;
    if (p < body_end) return p;
    if (p < body_end + suffix_len) return body_end;
    return p - suffix_len;
}

WrappedQuery expand_library(std::string_view src, const std::vector<std::string>& library) {
    WrappedQuery w;
    w.source = std::string(src);
    if (library.empty()) return w;
    std::vector<Token> toks;
    try {
        toks = tokenize(src);
    } catch (const ParseError&) {
        return w;
    }
    if (toks.size() < 4 || toks[1].text != "query" || toks[1].kind != Tok::Word ||
        (toks[0].text != "set" && toks[0].text != "boolean"))
        return w;
    std::size_t semi = toks.size() - 2;
    if (toks[semi].kind != Tok::Word || toks[semi].text != ";") return w;
    w.body_begin = toks[2].begin;
    w.body_end = toks[semi - 1].end;
    std::string prefix = "let ";
    for (std::size_t i = 0; i < library.size(); ++i) {
        if (i) prefix += ",\n";
        prefix += library[i];
    }
    prefix += "\nin ";
    const std::string suffix = " endlet";
    w.prefix_len = static_cast<std::uint32_t>(prefix.size());
    w.suffix_len = static_cast<std::uint32_t>(suffix.size());
    w.source = std::string(src.substr(0, w.body_begin)) + prefix +
               std::string(src.substr(w.body_begin, w.body_end - w.body_begin)) + suffix +
               std::string(src.substr(w.body_end));
    return w;
}

}  // namespace hwdb
