#include "hwdb/evaluator.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hwdb/analysis.hpp"
#include "hwdb/library.hpp"

namespace hwdb {

namespace {

std::string_view unquote(std::string_view s) { return s.substr(1, s.size() - 2); }

}  // namespace

bool wildcard_match(std::string_view text, std::string_view pattern, bool lead, bool trail) {
    if (lead && trail) return text.find(pattern) != std::string_view::npos;
    if (trail) return text.substr(0, pattern.size()) == pattern;
    if (lead) return text.size() >= pattern.size() && text.substr(text.size() - pattern.size()) == pattern;
    return text == pattern;
}

std::size_t Evaluator::FlatHash::operator()(const FlatExpr& e) const {
    std::size_t h = e.size();
    for (const auto& x : e) h = h * 1000003u ^ ((static_cast<std::size_t>(x.label) << 32) | x.member);
    return h;
}

Evaluator::Evaluator(Wdb& wdb, Bisimulator& bisim) : wdb_(wdb), bisim_(bisim) {
    std::string src = "set query let ";
    src += predefined_library_source();
    src += " in {} endlet;";
    internal_ = parse(src);
    auto a = analyze(internal_);
    if (!a.ok()) throw InternalError("predefined library does not analyse: " + a.errors.front().message);
    const Node* decls = internal_.tree->kid(0)->kid(2)->kid(0)->kid(1);
    for (const auto& d : decls->kids)
        if (!d->is_leaf() && d->kid(2)->ident() == "Regroup") regroup_ = d.get();
}

Evaluator::Binding& Evaluator::slot(const Node* idn) {
    auto s = static_cast<std::size_t>(idn->slot);
    if (s >= env_.size()) env_.resize(s + 1);
    return env_[s];
}

NameId Evaluator::make(FlatExpr e) {
    auto& sys = wdb_.sys();
    if (e.empty()) return sys.empty_set();
    auto it = interned_.find(e);
    if (it != interned_.end()) return it->second;
    NameId id = sys.fresh_name("res");
    sys.define(id, e);
    interned_.emplace(std::move(e), id);
    ++stats.equations;
    return id;
}

QueryResult Evaluator::run(const ParseResult& pr) {
    const Node* q = pr.tree->kid(0);
    if (q->cat != Cat::Query) throw Error("not a query");
    constants_.clear();
    QueryResult r;
    const Node* body = q->kid(2);
    if (q->kid(0)->text == "boolean") {
        r.boolean = true;
        r.truth = formula(body);
    } else {
        r.root = term(body);
        wdb_.lookup_equation(r.root);
    }
    return r;
}

// ---- labels

LabelId Evaluator::label(const Node* l) {
    const Node* k = l->kid(0);
    switch (k->cat) {
        case Cat::LabelValue: return wdb_.sys().label(unquote(k->kid(0)->text));
        case Cat::LabelVariable: return slot(k->decl).label;
        case Cat::LabelConstant: return wdb_.sys().label(unquote(k->decl->parent->kid(4)->kid(0)->text));
        default: throw InternalError("label expected");
    }
}

bool Evaluator::label_equality(const Node* lhs, const Node* rhs) {
    if (lhs->cat == Cat::Label && rhs->cat == Cat::Label) return label(lhs) == label(rhs);
    const Node* w = lhs->cat == Cat::WildcardLabel ? lhs : rhs;
    const Node* other = w == lhs ? rhs : lhs;
    const std::string text = wdb_.sys().label_text(label(other));
    std::string pattern;
    bool lead = false, trail = false;
    if (w->size() == 1) {
        std::string_view p = unquote(w->kid(0)->text);
        lead = p.front() == '*';
        if (lead) p.remove_prefix(1);
        trail = !p.empty() && p.back() == '*';
        if (trail) p.remove_suffix(1);
        pattern = std::string(p);
    } else {
        lead = w->kid(0)->is_word("*");
        trail = w->kids.back()->is_word("*");
        const Node* id = lead ? w->kid(1) : w->kid(0);
        LabelId l = id->cat == Cat::LabelVariable ? slot(id->decl).label
                                                  : wdb_.sys().label(unquote(id->decl->parent->kid(4)->kid(0)->text));
        pattern = wdb_.sys().label_text(l);
    }
    return wildcard_match(text, pattern, lead, trail);
}

// Binds a variable pair to an element; false when a fixed label does not match.
bool Evaluator::bind_pair(const Node* vp, const Elem& e) {
    const Node* l = vp->kid(0);
    if (l->cat == Cat::LabelValue) {
        if (wdb_.sys().label(unquote(l->kid(0)->text)) != e.label) return false;
    } else {
        slot(l).label = e.label;
    }
    slot(vp->kid(2)).set = e.member;
    return true;
}

// ---- terms

NameId Evaluator::term(const Node* t) {
    if (t->size() == 3) {
        const Node* mu = t->kid(1);
        if (mu->size() == 1) return term(mu->kid(0));
        FlatExpr out;
        for (const auto& k : mu->kids) {
            if (k->is_leaf()) continue;
            auto e = eq(term(k.get()));
            out.insert(out.end(), e.begin(), e.end());
        }
        return make(std::move(out));
    }
    return term_inner(t->kid(0));
}

NameId Evaluator::term_inner(const Node* n) {
    auto& sys = wdb_.sys();
    switch (n->cat) {
        case Cat::SetVariable: return slot(n->decl).set;
        case Cat::SetConstant: return constant(n->decl->parent);
        case Cat::SetName: return wdb_.intern(parse_set_name(n->kid(0)->text, ""));
        case Cat::AtomicValue: return sys.atom(unquote(n->kid(0)->text));
        case Cat::Enumerate: {
            FlatExpr out;
            if (n->size() == 3)
                for (const auto& lt : n->kid(1)->kids) {
                    if (lt->is_leaf()) continue;
                    LabelId l = label(lt->kid(0));
                    out.push_back({l, term(lt->kid(2))});
                }
            return make(std::move(out));
        }
        case Cat::Union: {
            FlatExpr out;
            for (const auto& e : eq(term(n->kid(1)))) {
                auto inner = eq(e.member);
                out.insert(out.end(), inner.begin(), inner.end());
            }
            return make(std::move(out));
        }
        case Cat::Collect: return collect(n);
        case Cat::Separate: return separate(n);
        case Cat::TransitiveClosure: return tc(term(n->kid(1)));
        case Cat::Recursion: return recursion(n);
        case Cat::Decoration: {
            NameId g = term(n->kid(2));
            return decorate(g, term(n->kid(4)));
        }
        case Cat::IfElseTerm: return formula(n->kid(1)) ? term(n->kid(3)) : term(n->kid(5));
        case Cat::SetQueryCall: {
            const Node* qdecl = n->kid(1)->decl->parent;
            auto args = arguments(n);
            return with_params(qdecl, args, [&] { return term(qdecl->kids.back().get()); });
        }
        case Cat::TermWithDecls: return term(n->kid(3));
        default: throw InternalError("unexpected term category " + std::string(cat_name(n->cat)));
    }
}

NameId Evaluator::constant(const Node* decl) {
    auto it = constants_.find(decl);
    if (it != constants_.end()) return it->second;
    NameId v = term(decl->kid(4));
    constants_.emplace(decl, v);
    return v;
}

std::vector<Evaluator::Binding> Evaluator::arguments(const Node* call) {
    std::vector<Binding> out;
    for (std::size_t i = 3; i + 1 < call->size(); ++i) {
        const Node* p = call->kid(i);
        if (p->is_leaf()) continue;
        if (p->cat == Cat::Label) out.push_back({0, label(p)});
        else out.push_back({term(p), 0});
    }
    return out;
}

std::vector<Evaluator::Binding> Evaluator::save(const std::vector<const Node*>& idns) {
    std::vector<Binding> saved;
    for (const Node* n : idns) saved.push_back(slot(n));
    return saved;
}

void Evaluator::restore(const std::vector<const Node*>& idns, const std::vector<Binding>& saved) {
    for (std::size_t i = idns.size(); i-- > 0;) slot(idns[i]) = saved[i];
}

std::vector<const Node*> Evaluator::pair_idns(const Node* vp) {
    std::vector<const Node*> out;
    if (vp->kid(0)->cat == Cat::LabelVariable) out.push_back(vp->kid(0));
    out.push_back(vp->kid(2));
    return out;
}

NameId Evaluator::collect(const Node* n) {
    const Node* lt = n->kid(2);
    const Node* vp = n->kid(4);
    const Node* cond = n->size() == 10 ? n->kid(8) : nullptr;
    FlatExpr src = eq(term(n->kid(6)));
    auto idns = pair_idns(vp);
    auto saved = save(idns);
    FlatExpr out;
    for (const auto& e : src) {
        if (!bind_pair(vp, e)) continue;
        if (cond && !formula(cond)) continue;
        LabelId l = label(lt->kid(0));
        out.push_back({l, term(lt->kid(2))});
    }
    restore(idns, saved);
    return make(std::move(out));
}

NameId Evaluator::separate(const Node* n) {
    const Node* vp = n->kid(2);
    const Node* cond = n->kid(6);
    FlatExpr src = eq(term(n->kid(4)));
    auto idns = pair_idns(vp);
    auto saved = save(idns);
    FlatExpr out;
    for (const auto& e : src)
        if (bind_pair(vp, e) && formula(cond)) out.push_back(e);
    restore(idns, saved);
    return make(std::move(out));
}

// Iterates p_{k+1} = p_k U {l:x in t | phi(l,x,p_k)} until no element of t is newly marked.
NameId Evaluator::recursion(const Node* n) {
    const Node* p = n->kid(1);
    const Node* vp = n->kid(3);
    const Node* cond = n->kid(7);
    FlatExpr src = eq(term(n->kid(5)));
    auto idns = pair_idns(vp);
    idns.insert(idns.begin(), p);
    auto saved = save(idns);
    std::vector<char> marked(src.size(), 0);
    NameId current = 0;
    for (;;) {
        ++stats.recursion_passes;
        FlatExpr cur;
        for (std::size_t i = 0; i < src.size(); ++i)
            if (marked[i]) cur.push_back(src[i]);
        current = make(std::move(cur));
        slot(p).set = current;
        std::vector<std::size_t> fresh;
        for (std::size_t i = 0; i < src.size(); ++i) {
            if (marked[i] || !bind_pair(vp, src[i])) continue;
            if (formula(cond)) fresh.push_back(i);
        }
        if (fresh.empty()) break;
        for (auto i : fresh) marked[i] = 1;
    }
    restore(idns, saved);
    return current;
}

// {null:a} extended by the elements of every member already collected.
NameId Evaluator::tc(NameId a) {
    auto& sys = wdb_.sys();
    FlatExpr res{{sys.label(kNullLabel), a}};
    std::set<std::pair<LabelId, NameId>> seen{{res[0].label, a}};
    for (std::size_t i = 0; i < res.size(); ++i) {
        NameId z = res[i].member;
        for (const auto& e : eq(z))
            if (seen.insert({e.label, e.member}).second) res.push_back(e);
    }
    return make(std::move(res));
}

NameId Evaluator::decorate(NameId g, NameId v) {
    auto& sys = wdb_.sys();
    NameId regrouped = with_params(regroup_, {Binding{g, 0}}, [&] { return term(regroup_->kids.back().get()); });

    // node -> its labelled children, read off the regrouped pairs {fst:x, snd:children}
    LabelId fst = sys.label("fst"), snd = sys.label("snd");
    std::vector<std::pair<NameId, FlatExpr>> nodes;
    for (const auto& e : eq(regrouped)) {
        NameId x = 0, kids = 0;
        bool has_x = false, has_kids = false;
        for (const auto& pe : eq(e.member)) {
            if (pe.label == fst) x = pe.member, has_x = true;
            if (pe.label == snd) kids = pe.member, has_kids = true;
        }
        if (has_x && has_kids) nodes.emplace_back(x, eq(kids));
    }

    std::vector<NameId> order;
    for (const auto& [x, _] : nodes) order.push_back(x);
    std::sort(order.begin(), order.end(), [&](NameId a, NameId b) { return sys.full_name(a) < sys.full_name(b); });
    order.erase(std::unique(order.begin(), order.end()), order.end());
    auto canon = [&](NameId n) -> std::optional<NameId> {
        for (NameId u : order)
            if (u == n || bisim_.bisimilar(u, n)) return u;
        return std::nullopt;
    };

    std::map<NameId, FlatExpr> graph;
    for (const auto& [x, kids] : nodes) {
        NameId u = *canon(x);
        auto& out = graph[u];
        for (const auto& k : kids) {
            auto w = canon(k.member);
            if (!w) continue;
            Elem el{k.label, *w};
            if (std::find(out.begin(), out.end(), el) == out.end()) out.push_back(el);
        }
    }
    auto cv = canon(v);
    if (!cv) return sys.empty_set();

    std::map<NameId, NameId> dup;
    for (const auto& [u, _] : graph) dup[u] = sys.fresh_name("res");
    for (const auto& [u, elems] : graph) {
        FlatExpr mapped;
        for (const auto& e : elems) mapped.push_back({e.label, dup.at(e.member)});
        sys.define(dup[u], std::move(mapped));
        ++stats.equations;
    }
    return dup.at(*cv);
}

// ---- formulas

bool Evaluator::member(LabelId l, NameId a, NameId b) {
    for (const auto& e : eq(b))
        if (e.label == l && (e.member == a || bisim_.bisimilar(e.member, a))) return true;
    return false;
}

bool Evaluator::formula(const Node* f) {
    ++stats.formula_evals;
    if (f->size() == 3) {
        const Node* x = f->kid(1);
        switch (x->cat) {
            case Cat::DeltaFormula: return formula(x);
            case Cat::Conjunction:
                for (const auto& k : x->kids)
                    if (!k->is_leaf() && !formula(k.get())) return false;
                return true;
            case Cat::Disjunction:
                for (const auto& k : x->kids)
                    if (!k->is_leaf() && formula(k.get())) return true;
                return false;
            case Cat::QuasiImplication: {
                bool v = formula(x->kid(0));
                for (std::size_t i = 1; i + 1 < x->size(); i += 2) {
                    const std::string& op = x->kid(i)->text;
                    const Node* rhs = x->kid(i + 1);
                    if (op == "=>" || op == "implies") v = !v || formula(rhs);
                    else if (op == "<=") v = v || !formula(rhs);
                    else v = v == formula(rhs);
                }
                return v;
            }
            default: throw InternalError("unexpected grouped formula");
        }
    }
    return formula_inner(f->kid(0));
}

bool Evaluator::formula_inner(const Node* n) {
    if (n->is_leaf()) return n->text == "true";
    switch (n->cat) {
        case Cat::SetEquality: {
            NameId a = term(n->kid(0));
            NameId b = term(n->kid(2));
            return a == b || bisim_.bisimilar(a, b);
        }
        case Cat::LabelEquality: return label_equality(n->kid(0), n->kid(2));
        case Cat::LabelRelationship: {
            const auto& sys = wdb_.sys();
            int c = compare_labels(sys.label_text(label(n->kid(0))), sys.label_text(label(n->kid(2))));
            const std::string& op = n->kid(1)->text;
            if (op == "<") return c < 0;
            if (op == ">") return c > 0;
            if (op == "<=") return c <= 0;
            return c >= 0;
        }
        case Cat::Membership: {
            const Node* lt = n->kid(0);
            LabelId l = label(lt->kid(0));
            NameId a = term(lt->kid(2));
            return member(l, a, term(n->kid(2)));
        }
        case Cat::BooleanQueryCall: {
            const Node* qdecl = n->kid(1)->decl->parent;
            auto args = arguments(n);
            return with_params(qdecl, args, [&] { return formula(qdecl->kids.back().get()); });
        }
        case Cat::IfElseFormula: return formula(n->kid(1)) ? formula(n->kid(3)) : formula(n->kid(5));
        case Cat::FormulaWithDecls: return formula(n->kid(3));
        case Cat::NegatedFormula: return !formula(n->kid(1));
        case Cat::QuantifiedFormula: {
            const Node* q = n->kid(0);
            const Node* vp = q->kid(1);
            bool all = q->cat == Cat::Forall;
            FlatExpr src = eq(term(q->kid(3)));
            auto idns = pair_idns(vp);
            auto saved = save(idns);
            bool result = all;
            for (const auto& e : src) {
                if (!bind_pair(vp, e)) continue;
                if (formula(n->kid(1)) != all) {
                    result = !all;
                    break;
                }
            }
            restore(idns, saved);
            return result;
        }
        default: throw InternalError("unexpected formula category " + std::string(cat_name(n->cat)));
    }
}

}  // namespace hwdb
