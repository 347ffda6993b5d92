#include "hwdb/parser.hpp"

#include <array>
#include <cctype>
#include <set>

namespace hwdb {

namespace {

const std::set<std::string, std::less<>>& keywords() {
    static const std::set<std::string, std::less<>> k = {
        "set",    "query",    "boolean", "constant", "label",   "library", "add",    "list",
        "verbose", "exit",    "be",      "let",      "in",      "endlet",  "U",      "union",
        "collect", "separate", "where",  "and",      "or",      "not",     "tc",     "TC",
        "transitiveclosure", "recursion", "decorate", "if", "then", "else",  "fi",     "call",
        "implies", "iff",     "forall",  "exists",   "true",    "false"};
    return k;
}

bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    const std::size_t n = src.size();
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t b, std::size_t e) {
        out.push_back({k, std::string(src.substr(b, e - b)), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(e)});
    };
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (std::isalpha(c)) {
            std::size_t j = i;
            while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '+' || src[j] == '-' || src[j] == '.')) ++j;
            if (src.substr(j, 3) == "://") {
                std::size_t k = j + 3;
                while (k < n && src[k] != '#' && !std::isspace(static_cast<unsigned char>(src[k])) &&
                       std::string_view(",;(){}").find(src[k]) == std::string_view::npos)
                    ++k;
                if (k >= n || src[k] != '#') throw ParseError(static_cast<std::uint32_t>(i), "malformed set name: missing '#'");
                std::size_t e = k + 1;
                while (e < n && ident_char(static_cast<unsigned char>(src[e]))) ++e;
                if (e == k + 1) throw ParseError(static_cast<std::uint32_t>(k + 1), "malformed set name: missing identifier after '#'");
                push(Tok::SetNameLit, i, e);
                i = e;
                continue;
            }
        }
        if (ident_char(c)) {
            std::size_t j = i;
            while (j < n && ident_char(static_cast<unsigned char>(src[j]))) ++j;
            auto word = src.substr(i, j - i);
            push(keywords().count(word) ? Tok::Word : Tok::Ident, i, j);
            i = j;
            continue;
        }
        if (c == '\'' || c == '"') {
            std::size_t j = src.find(static_cast<char>(c), i + 1);
            if (j == std::string_view::npos || src.substr(i, j - i).find('\n') != std::string_view::npos)
                throw ParseError(static_cast<std::uint32_t>(i), std::string("unterminated quote ") + static_cast<char>(c));
            auto body = src.substr(i + 1, j - i - 1);
            if (body.empty()) throw ParseError(static_cast<std::uint32_t>(i), "empty quoted value");
            Tok kind = c == '"' ? Tok::Atom : Tok::QLabel;
            if (c == '\'') {
                auto core = body;
                bool lead = !core.empty() && core.front() == '*';
                if (lead) core.remove_prefix(1);
                bool trail = !core.empty() && core.back() == '*';
                if (trail) core.remove_suffix(1);
                if (core.find('*') != std::string_view::npos || (core.empty() && (lead || trail)))
                    throw ParseError(static_cast<std::uint32_t>(i), "wildcard '*' may only appear at the ends of a label");
                if (lead || trail) kind = Tok::QWild;
            }
            push(kind, i, j + 1);
            i = j + 1;
            continue;
        }
        static constexpr std::array<std::string_view, 5> multi = {"<=>", "<=", ">=", "=>", "<-"};
        bool matched = false;
        for (auto m : multi) {
            if (src.substr(i, m.size()) == m) {
                push(Tok::Word, i, i + m.size());
                i += m.size();
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string_view("=<>:,;(){}.|*").find(static_cast<char>(c)) != std::string_view::npos) {
            push(Tok::Word, i, i + 1);
            ++i;
            continue;
        }
        throw ParseError(static_cast<std::uint32_t>(i), std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
    out.push_back({Tok::End, "", static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n)});
    return out;
}

namespace {

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    NodePtr top() {
        NodePtr cmd;
        if (word("library")) {
            auto lib = leaf();
            NodePtr lc;
            if (word("add")) {
                auto add = leaf();
                auto d = declarations();
                if (!d) return nullptr;
                lc = mk(Cat::LibraryCommand, std::move(add), std::move(d));
            } else if (word("list")) {
                auto l = leaf();
                if (word("verbose")) {
                    auto v = leaf();
                    lc = mk(Cat::LibraryCommand, std::move(l), std::move(v));
                } else {
                    lc = mk(Cat::LibraryCommand, std::move(l));
                }
            } else {
                fail("'add' or 'list'");
                return nullptr;
            }
            auto semi = take(";");
            if (!semi) return nullptr;
            cmd = mk(Cat::TopLevelCommand, std::move(lib), std::move(lc), std::move(semi));
        } else if (word("exit")) {
            auto e = leaf();
            auto semi = take(";");
            if (!semi) return nullptr;
            cmd = mk(Cat::TopLevelCommand, std::move(e), std::move(semi));
        } else {
            auto q = query();
            if (!q) return nullptr;
            auto semi = take(";");
            if (!semi) return nullptr;
            cmd = mk(Cat::TopLevelCommand, std::move(q), std::move(semi));
        }
        if (!at_end()) {
            fail("end of command");
            return nullptr;
        }
        return cmd;
    }

    NodePtr declarations_only() {
        auto d = declarations();
        if (!d) return nullptr;
        if (!at_end()) {
            fail("',' or end of declarations");
            return nullptr;
        }
        return d;
    }

    std::uint32_t far_pos() const { return far_; }
    const std::string& far_msg() const { return far_msg_; }

private:
    // ---- token helpers
    const Token& cur() const { return toks_[pos_]; }
    const Token& ahead(std::size_t k) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return cur().kind == Tok::End; }
    bool word(std::string_view w, std::size_t k = 0) const {
        const auto& t = ahead(k);
        return t.kind == Tok::Word && t.text == w;
    }
    bool kind(Tok k, std::size_t off = 0) const { return ahead(off).kind == k; }
    bool any_word(std::initializer_list<std::string_view> ws) const {
        for (auto w : ws)
            if (word(w)) return true;
        return false;
    }

    void fail(const std::string& what) {
        std::uint32_t p = cur().begin;
        if (far_set_ && p < far_) return;
        if (far_set_ && p == far_) return;
        far_set_ = true;
        far_ = p;
        far_msg_ = "expected " + what + (at_end() ? " but the input ended" : ", found '" + cur().text + "'");
    }

    NodePtr leaf() {
        auto n = std::make_unique<Node>();
        n->cat = Cat::Leaf;
        n->tok = cur().kind;
        n->text = cur().text;
        n->begin = cur().begin;
        n->end = cur().end;
        ++pos_;
        return n;
    }
    NodePtr take(std::string_view w) {
        if (word(w)) return leaf();
        fail("'" + std::string(w) + "'");
        return nullptr;
    }
    NodePtr take_any(std::initializer_list<std::string_view> ws, const char* what) {
        if (any_word(ws)) return leaf();
        fail(what);
        return nullptr;
    }

    static NodePtr mk_from(Cat c, std::vector<NodePtr> kids) {
        auto n = std::make_unique<Node>();
        n->cat = c;
        if (!kids.empty()) {
            n->begin = kids.front()->begin;
            n->end = kids.back()->end;
        }
        n->kids = std::move(kids);
        return n;
    }
    template <class... P>
    static NodePtr mk(Cat c, P&&... kids) {
        std::vector<NodePtr> v;
        (v.push_back(std::forward<P>(kids)), ...);
        return mk_from(c, std::move(v));
    }

    NodePtr ident(Cat c, bool declaration) {
        if (!kind(Tok::Ident)) {
            fail("identifier");
            return nullptr;
        }
        auto n = mk(c, leaf());
        n->idn = declaration;
        return n;
    }

    // ---- commands and declarations
    NodePtr query() {
        if (word("boolean") && word("query", 1)) {
            auto b = leaf();
            auto q = leaf();
            auto f = formula();
            if (!f) return nullptr;
            return mk(Cat::Query, std::move(b), std::move(q), std::move(f));
        }
        if (word("set") && word("query", 1)) {
            auto s = leaf();
            auto q = leaf();
            auto t = term();
            if (!t) return nullptr;
            return mk(Cat::Query, std::move(s), std::move(q), std::move(t));
        }
        fail("'set query', 'boolean query', 'library' or 'exit'");
        return nullptr;
    }

    NodePtr declarations() {
        std::vector<NodePtr> kids;
        auto d = declaration();
        if (!d) return nullptr;
        kids.push_back(std::move(d));
        while (word(",")) {
            kids.push_back(leaf());
            auto next = declaration();
            if (!next) return nullptr;
            kids.push_back(std::move(next));
        }
        return mk_from(Cat::Declarations, std::move(kids));
    }

    NodePtr declaration() {
        if (word("set") && word("constant", 1)) {
            auto s = leaf();
            auto c = leaf();
            auto name = ident(Cat::SetConstant, true);
            if (!name) return nullptr;
            auto be = take_any({"be", "="}, "'be' or '='");
            if (!be) return nullptr;
            auto t = term();
            if (!t) return nullptr;
            return mk(Cat::SetConstantDecl, std::move(s), std::move(c), std::move(name), std::move(be), std::move(t));
        }
        if (word("label") && word("constant", 1)) {
            auto l = leaf();
            auto c = leaf();
            auto name = ident(Cat::LabelConstant, true);
            if (!name) return nullptr;
            auto be = take_any({"be", "="}, "'be' or '='");
            if (!be) return nullptr;
            if (!kind(Tok::QLabel)) {
                fail("label value");
                return nullptr;
            }
            auto v = mk(Cat::LabelValue, leaf());
            return mk(Cat::LabelConstantDecl, std::move(l), std::move(c), std::move(name), std::move(be), std::move(v));
        }
        bool set_q = word("set") && word("query", 1);
        bool bool_q = word("boolean") && word("query", 1);
        if (set_q || bool_q) {
            std::vector<NodePtr> kids;
            kids.push_back(leaf());
            kids.push_back(leaf());
            auto name = ident(set_q ? Cat::SetQueryName : Cat::BooleanQueryName, true);
            if (!name) return nullptr;
            kids.push_back(std::move(name));
            auto lp = take("(");
            if (!lp) return nullptr;
            kids.push_back(std::move(lp));
            if (!word(")")) {
                auto vars = variables();
                if (!vars) return nullptr;
                kids.push_back(std::move(vars));
            }
            auto rp = take(")");
            if (!rp) return nullptr;
            kids.push_back(std::move(rp));
            auto be = take_any({"be", "="}, "'be' or '='");
            if (!be) return nullptr;
            kids.push_back(std::move(be));
            auto body = set_q ? term() : formula();
            if (!body) return nullptr;
            kids.push_back(std::move(body));
            return mk_from(set_q ? Cat::SetQueryDecl : Cat::BooleanQueryDecl, std::move(kids));
        }
        fail("declaration");
        return nullptr;
    }

    NodePtr variables() {
        std::vector<NodePtr> kids;
        for (;;) {
            NodePtr v;
            if (word("set")) {
                auto s = leaf();
                auto x = ident(Cat::SetVariable, true);
                if (!x) return nullptr;
                v = mk(Cat::Variable, std::move(s), std::move(x));
            } else if (word("label")) {
                auto l = leaf();
                auto x = ident(Cat::LabelVariable, true);
                if (!x) return nullptr;
                v = mk(Cat::Variable, std::move(l), std::move(x));
            } else {
                fail("'set' or 'label' parameter");
                return nullptr;
            }
            kids.push_back(std::move(v));
            if (!word(",")) break;
            kids.push_back(leaf());
        }
        return mk_from(Cat::Variables, std::move(kids));
    }

    // ---- terms
    NodePtr term() {
        std::size_t save = pos_;
        NodePtr inner;
        switch (cur().kind) {
            case Tok::SetNameLit: inner = mk(Cat::SetName, leaf()); break;
            case Tok::Atom: inner = mk(Cat::AtomicValue, leaf()); break;
            case Tok::Ident: inner = ident(Cat::SetVariable, false); break;
            case Tok::Word: inner = term_word(); break;
            default: fail("term"); break;
        }
        if (!inner) {
            pos_ = save;
            return nullptr;
        }
        if (inner->cat == Cat::DeltaTerm) return inner;
        return mk(Cat::DeltaTerm, std::move(inner));
    }

    NodePtr term_word() {
        if (word("{")) {
            auto lb = leaf();
            if (word("}")) {
                auto rb = leaf();
                return mk(Cat::Enumerate, std::move(lb), std::move(rb));
            }
            std::vector<NodePtr> items;
            for (;;) {
                auto lt = labelled_term();
                if (!lt) return nullptr;
                items.push_back(std::move(lt));
                if (!word(",")) break;
                items.push_back(leaf());
            }
            auto lts = mk_from(Cat::LabelledTerms, std::move(items));
            auto rb = take("}");
            if (!rb) return nullptr;
            return mk(Cat::Enumerate, std::move(lb), std::move(lts), std::move(rb));
        }
        if (any_word({"U", "union"})) {
            auto u = leaf();
            auto t = term();
            if (!t) return nullptr;
            return mk(Cat::Union, std::move(u), std::move(t));
        }
        if (word("(")) {
            auto lp = leaf();
            std::vector<NodePtr> parts;
            auto t = term();
            if (!t) return nullptr;
            parts.push_back(std::move(t));
            while (any_word({"U", "union"})) {
                parts.push_back(leaf());
                auto next = term();
                if (!next) return nullptr;
                parts.push_back(std::move(next));
            }
            auto mu = mk_from(Cat::MultipleUnion, std::move(parts));
            auto rp = take(")");
            if (!rp) return nullptr;
            return mk(Cat::DeltaTerm, std::move(lp), std::move(mu), std::move(rp));
        }
        if (word("collect")) {
            std::vector<NodePtr> k;
            k.push_back(leaf());
            if (!push(k, take("{"))) return nullptr;
            if (!push(k, labelled_term())) return nullptr;
            if (!push(k, take_any({"where", "|"}, "'where' or '|'"))) return nullptr;
            if (!push(k, variable_pair())) return nullptr;
            if (!push(k, take_any({"in", "<-"}, "'in' or '<-'"))) return nullptr;
            if (!push(k, term())) return nullptr;
            if (word("and")) {
                k.push_back(leaf());
                if (!push(k, formula())) return nullptr;
            }
            if (!push(k, take("}"))) return nullptr;
            return mk_from(Cat::Collect, std::move(k));
        }
        if (word("separate")) {
            std::vector<NodePtr> k;
            k.push_back(leaf());
            if (!push(k, take("{"))) return nullptr;
            if (!push(k, variable_pair())) return nullptr;
            if (!push(k, take_any({"in", "<-"}, "'in' or '<-'"))) return nullptr;
            if (!push(k, term())) return nullptr;
            if (!push(k, take_any({"where", "|"}, "'where' or '|'"))) return nullptr;
            if (!push(k, formula())) return nullptr;
            if (!push(k, take("}"))) return nullptr;
            return mk_from(Cat::Separate, std::move(k));
        }
        if (any_word({"tc", "TC", "transitiveclosure"})) {
            auto kw = leaf();
            auto t = term();
            if (!t) return nullptr;
            return mk(Cat::TransitiveClosure, std::move(kw), std::move(t));
        }
        if (word("recursion")) {
            std::vector<NodePtr> k;
            k.push_back(leaf());
            if (!push(k, ident(Cat::SetVariable, true))) return nullptr;
            if (!push(k, take("{"))) return nullptr;
            if (!push(k, variable_pair())) return nullptr;
            if (!push(k, take_any({"in", "<-"}, "'in' or '<-'"))) return nullptr;
            if (!push(k, term())) return nullptr;
            if (!push(k, take_any({"where", "|"}, "'where' or '|'"))) return nullptr;
            if (!push(k, formula())) return nullptr;
            if (!push(k, take("}"))) return nullptr;
            return mk_from(Cat::Recursion, std::move(k));
        }
        if (word("decorate")) {
            std::vector<NodePtr> k;
            k.push_back(leaf());
            if (!push(k, take("("))) return nullptr;
            if (!push(k, term())) return nullptr;
            if (!push(k, take(","))) return nullptr;
            if (!push(k, term())) return nullptr;
            if (!push(k, take(")"))) return nullptr;
            return mk_from(Cat::Decoration, std::move(k));
        }
        if (word("if")) {
            std::vector<NodePtr> k;
            k.push_back(leaf());
            if (!push(k, formula())) return nullptr;
            if (!push(k, take("then"))) return nullptr;
            if (!push(k, term())) return nullptr;
            if (!push(k, take("else"))) return nullptr;
            if (!push(k, term())) return nullptr;
            if (!push(k, take("fi"))) return nullptr;
            return mk_from(Cat::IfElseTerm, std::move(k));
        }
        if (word("call")) return call(Cat::SetQueryCall, Cat::SetQueryName);
        if (word("let")) {
            std::vector<NodePtr> k;
            k.push_back(leaf());
            if (!push(k, declarations())) return nullptr;
            if (!push(k, take("in"))) return nullptr;
            if (!push(k, term())) return nullptr;
            if (!push(k, take("endlet"))) return nullptr;
            return mk_from(Cat::TermWithDecls, std::move(k));
        }
        fail("term");
        return nullptr;
    }

    static bool push(std::vector<NodePtr>& k, NodePtr n) {
        if (!n) return false;
        k.push_back(std::move(n));
        return true;
    }

    NodePtr call(Cat call_cat, Cat name_cat) {
        std::vector<NodePtr> k;
        k.push_back(leaf());
        if (!push(k, ident(name_cat, false))) return nullptr;
        if (!push(k, take("("))) return nullptr;
        if (!word(")")) {
            for (;;) {
                if (kind(Tok::QLabel)) {
                    auto v = mk(Cat::LabelValue, leaf());
                    k.push_back(mk(Cat::Label, std::move(v)));
                } else if (!push(k, term())) {
                    return nullptr;
                }
                if (!word(",")) break;
                k.push_back(leaf());
            }
        }
        if (!push(k, take(")"))) return nullptr;
        return mk_from(call_cat, std::move(k));
    }

    NodePtr label() {
        if (kind(Tok::Ident)) return mk(Cat::Label, ident(Cat::LabelVariable, false));
        if (kind(Tok::QLabel)) return mk(Cat::Label, mk(Cat::LabelValue, leaf()));
        fail("label");
        return nullptr;
    }

    NodePtr labelled_term() {
        auto l = label();
        if (!l) return nullptr;
        auto colon = take(":");
        if (!colon) return nullptr;
        auto t = term();
        if (!t) return nullptr;
        return mk(Cat::LabelledTerm, std::move(l), std::move(colon), std::move(t));
    }

    NodePtr variable_pair() {
        NodePtr l;
        if (kind(Tok::Ident)) l = ident(Cat::LabelVariable, true);
        else if (kind(Tok::QLabel)) l = mk(Cat::LabelValue, leaf());
        else {
            fail("label variable or label value");
            return nullptr;
        }
        auto colon = take(":");
        if (!colon) return nullptr;
        auto x = ident(Cat::SetVariable, true);
        if (!x) return nullptr;
        return mk(Cat::VariablePair, std::move(l), std::move(colon), std::move(x));
    }

    // ---- formulas
    NodePtr formula() {
        std::size_t save = pos_;
        if (any_word({"true", "false"})) return mk(Cat::DeltaFormula, leaf());
        if (word("not")) {
            auto n = leaf();
            auto f = formula();
            if (!f) {
                pos_ = save;
                return nullptr;
            }
            return mk(Cat::DeltaFormula, mk(Cat::NegatedFormula, std::move(n), std::move(f)));
        }
        if (any_word({"forall", "exists"})) {
            auto f = quantified();
            if (!f) pos_ = save;
            return f;
        }
        if (word("if")) {
            if (auto f = if_formula()) return f;
            pos_ = save;
        }
        if (word("let")) {
            if (auto f = let_formula()) return f;
            pos_ = save;
        }
        if (word("(")) {
            if (auto f = group()) return f;
            pos_ = save;
        }
        auto f = atomic();
        if (!f) pos_ = save;
        return f;
    }

    NodePtr quantified() {
        bool all = word("forall");
        std::vector<NodePtr> k;
        k.push_back(leaf());
        if (!push(k, variable_pair())) return nullptr;
        if (!push(k, take_any({"in", "<-"}, "'in' or '<-'"))) return nullptr;
        if (!push(k, term())) return nullptr;
        if (word(".")) k.push_back(leaf());
        auto q = mk_from(all ? Cat::Forall : Cat::Exists, std::move(k));
        auto f = formula();
        if (!f) return nullptr;
        return mk(Cat::DeltaFormula, mk(Cat::QuantifiedFormula, std::move(q), std::move(f)));
    }

    NodePtr if_formula() {
        std::vector<NodePtr> k;
        k.push_back(leaf());
        if (!push(k, formula())) return nullptr;
        if (!push(k, take("then"))) return nullptr;
        if (!push(k, formula())) return nullptr;
        if (!push(k, take("else"))) return nullptr;
        if (!push(k, formula())) return nullptr;
        if (!push(k, take("fi"))) return nullptr;
        return mk(Cat::DeltaFormula, mk_from(Cat::IfElseFormula, std::move(k)));
    }

    NodePtr let_formula() {
        std::vector<NodePtr> k;
        k.push_back(leaf());
        if (!push(k, declarations())) return nullptr;
        if (!push(k, take("in"))) return nullptr;
        if (!push(k, formula())) return nullptr;
        if (!push(k, take("endlet"))) return nullptr;
        return mk(Cat::DeltaFormula, mk_from(Cat::FormulaWithDecls, std::move(k)));
    }

    static bool is_quasi(std::string_view w) {
        return w == "<=" || w == "=>" || w == "implies" || w == "iff" || w == "<=>";
    }

    NodePtr group() {
        auto lp = leaf();
        auto f1 = formula();
        if (!f1) return nullptr;
        if (word(")")) {
            auto rp = leaf();
            return mk(Cat::DeltaFormula, std::move(lp), std::move(f1), std::move(rp));
        }
        Cat kind_cat;
        if (word("and")) kind_cat = Cat::Conjunction;
        else if (word("or")) kind_cat = Cat::Disjunction;
        else if (cur().kind == Tok::Word && is_quasi(cur().text)) kind_cat = Cat::QuasiImplication;
        else {
            fail("')', 'and', 'or' or an implication connective");
            return nullptr;
        }
        auto same = [&] {
            if (kind_cat == Cat::Conjunction) return word("and");
            if (kind_cat == Cat::Disjunction) return word("or");
            return cur().kind == Tok::Word && is_quasi(cur().text);
        };
        std::vector<NodePtr> k;
        k.push_back(std::move(f1));
        while (same()) {
            k.push_back(leaf());
            if (!push(k, formula())) return nullptr;
        }
        auto chain = mk_from(kind_cat, std::move(k));
        auto rp = take(")");
        if (!rp) return nullptr;
        return mk(Cat::DeltaFormula, std::move(lp), std::move(chain), std::move(rp));
    }

    NodePtr atomic() {
        std::size_t save = pos_;
        if ((kind(Tok::Ident) || kind(Tok::QLabel)) && word(":", 1)) {
            auto lt = labelled_term();
            if (lt) {
                auto in = take_any({"in", "<-"}, "'in' or '<-'");
                if (in) {
                    auto t = term();
                    if (t) return mk(Cat::DeltaFormula, mk(Cat::Membership, std::move(lt), std::move(in), std::move(t)));
                }
            }
            pos_ = save;
        }
        if (auto f = comparison()) return f;
        pos_ = save;
        if (word("call")) {
            auto c = call(Cat::BooleanQueryCall, Cat::BooleanQueryName);
            if (c) return mk(Cat::DeltaFormula, std::move(c));
            pos_ = save;
        }
        fail("formula");
        return nullptr;
    }

    NodePtr operand() {
        if (word("*")) {
            auto s = leaf();
            auto id = ident(Cat::LabelVariable, false);
            if (!id) return nullptr;
            if (word("*")) {
                auto s2 = leaf();
                return mk(Cat::WildcardLabel, std::move(s), std::move(id), std::move(s2));
            }
            return mk(Cat::WildcardLabel, std::move(s), std::move(id));
        }
        if (kind(Tok::QWild)) return mk(Cat::WildcardLabel, leaf());
        if (kind(Tok::QLabel)) return mk(Cat::Label, mk(Cat::LabelValue, leaf()));
        if (kind(Tok::Ident) && word("*", 1)) {
            auto id = ident(Cat::LabelVariable, false);
            auto s = leaf();
            return mk(Cat::WildcardLabel, std::move(id), std::move(s));
        }
        return term();
    }

    // DeltaTerm(SetVariable x) is the parser's guess for a bare identifier; on the label side it becomes Label(LabelVariable x).
    static bool to_label(NodePtr& n) {
        if (n->cat == Cat::Label) return true;
        if (n->cat == Cat::DeltaTerm && n->size() == 1 && n->kid(0)->cat == Cat::SetVariable) {
            n->cat = Cat::Label;
            n->kid(0)->cat = Cat::LabelVariable;
            return true;
        }
        return false;
    }

    NodePtr comparison() {
        auto lhs = operand();
        if (!lhs) return nullptr;
        if (!any_word({"=", "<", ">", "<=", ">="})) {
            fail("'=' or a label comparison");
            return nullptr;
        }
        auto op = leaf();
        auto rhs = operand();
        if (!rhs) return nullptr;
        if (op->text == "=") {
            bool lw = lhs->cat == Cat::WildcardLabel, rw = rhs->cat == Cat::WildcardLabel;
            bool ll = lhs->cat == Cat::Label, rl = rhs->cat == Cat::Label;
            if (lw || rw || ll || rl) {
                if ((lw && rw) || (!lw && !to_label(lhs)) || (!rw && !to_label(rhs))) {
                    fail("label on both sides of a label equality");
                    return nullptr;
                }
                return mk(Cat::DeltaFormula, mk(Cat::LabelEquality, std::move(lhs), std::move(op), std::move(rhs)));
            }
            return mk(Cat::DeltaFormula, mk(Cat::SetEquality, std::move(lhs), std::move(op), std::move(rhs)));
        }
        if (lhs->cat == Cat::WildcardLabel || rhs->cat == Cat::WildcardLabel || !to_label(lhs) || !to_label(rhs)) {
            fail("labels on both sides of a label comparison");
            return nullptr;
        }
        return mk(Cat::DeltaFormula, mk(Cat::LabelRelationship, std::move(lhs), std::move(op), std::move(rhs)));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::uint32_t far_ = 0;
    std::string far_msg_;
    bool far_set_ = false;
};

void link(Node* n, Node* parent) {
    n->parent = parent;
    for (auto& k : n->kids) link(k.get(), n);
}

void collect_identifiers(Node* n, std::vector<Node*>& out) {
    if (is_identifier_cat(n->cat) && !n->idn) out.push_back(n);
    for (auto& k : n->kids) collect_identifiers(k.get(), out);
}

void collect_btflvn(Node* n, ParseResult& pr) {
    auto add = [&](Node* bound) {
        std::vector<Node*> ins;
        collect_identifiers(bound, ins);
        pr.btflvn_sublists[bound] = std::move(ins);
    };
    switch (n->cat) {
        case Cat::Collect: add(n->kid(6)); break;
        case Cat::Separate: add(n->kid(4)); break;
        case Cat::Recursion: add(n->kid(5)); break;
        case Cat::Forall:
        case Cat::Exists: add(n->kid(3)); break;
        case Cat::Declarations:
            for (auto& k : n->kids)
                if (!k->is_leaf()) add(k.get());
            break;
        default: break;
    }
    for (auto& k : n->kids) collect_btflvn(k.get(), pr);
}

}  // namespace

void index_tree(ParseResult& pr) {
    pr.identifier_nodes.clear();
    pr.btflvn_sublists.clear();
    if (!pr.tree) return;
    link(pr.tree.get(), nullptr);
    collect_identifiers(pr.tree.get(), pr.identifier_nodes);
    collect_btflvn(pr.tree.get(), pr);
}

ParseResult parse(std::string_view source) {
    ParseResult pr;
    pr.source = std::string(source);
    Parser p(tokenize(source));
    pr.tree = p.top();
    if (!pr.tree) throw ParseError(p.far_pos(), p.far_msg());
    index_tree(pr);
    return pr;
}

ParseResult parse_declarations(std::string_view source) {
    ParseResult pr;
    pr.source = std::string(source);
    Parser p(tokenize(source));
    pr.tree = p.declarations_only();
    if (!pr.tree) throw ParseError(p.far_pos(), p.far_msg());
    index_tree(pr);
    return pr;
}

std::string_view cat_name(Cat c) {
    static constexpr std::array<std::string_view, static_cast<std::size_t>(Cat::Count_)> names = {
        "<leaf>",
        "<top level command>",
        "<library command>",
        "<query>",
        "<declarations>",
        "<set constant declaration>",
        "<label constant declaration>",
        "<set query declaration>",
        "<boolean query declaration>",
        "<variables>",
        "<variable>",
        "<set query name>",
        "<boolean query name>",
        "<set variable>",
        "<set constant>",
        "<label variable>",
        "<label constant>",
        "<delta-term>",
        "<set name>",
        "<atomic value>",
        "<enumerate>",
        "<union>",
        "<multiple union>",
        "<collect>",
        "<separate>",
        "<transitive closure>",
        "<recursion>",
        "<decoration>",
        "<if-else term>",
        "<set query call>",
        "<delta-term with declarations>",
        "<delta-formula>",
        "<set equality>",
        "<label equality>",
        "<wildcard label>",
        "<label relationship>",
        "<membership>",
        "<boolean query call>",
        "<if-else formula>",
        "<delta-formula with declarations>",
        "<conjunction>",
        "<disjunction>",
        "<quasi-implication>",
        "<quantified formula>",
        "<forall>",
        "<exists>",
        "<negated formula>",
        "<label>",
        "<label value>",
        "<labelled terms>",
        "<labelled term>",
        "<variable pair>",
    };
    return names[static_cast<std::size_t>(c)];
}

bool is_identifier_cat(Cat c) {
    switch (c) {
        case Cat::SetQueryName:
        case Cat::BooleanQueryName:
        case Cat::SetVariable:
        case Cat::SetConstant:
        case Cat::LabelVariable:
        case Cat::LabelConstant: return true;
        default: return false;
    }
}

namespace {

void reprint_into(const Node& n, std::string& out) {
    if (n.is_leaf()) {
        if (!out.empty()) out += ' ';
        out += n.text;
        return;
    }
    for (const auto& k : n.kids) reprint_into(*k, out);
}

}  // namespace

std::string reprint(const Node& n) {
    std::string out;
    reprint_into(n, out);
    return out;
}

std::string dump_tree(const Node& n) {
    if (n.is_leaf()) return n.text;
    std::string out(cat_name(n.cat));
    out += "(";
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (i) out += " ";
        out += dump_tree(*n.kid(i));
    }
    out += ")";
    return out;
}

}  // namespace hwdb
