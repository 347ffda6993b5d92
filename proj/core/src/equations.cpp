#include "hwdb/equations.hpp"

namespace hwdb {

EquationSystem::EquationSystem() {
    label(kNullLabel);
}

NameId EquationSystem::intern(const SetName& name) {
    return intern(name.document_url, name.simple);
}

NameId EquationSystem::intern(std::string_view url, std::string_view simple) {
    std::string key;
    key.reserve(url.size() + simple.size() + 1);
    key.append(url).push_back('#');
    key.append(simple);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    auto id = static_cast<NameId>(names_.size());
    names_.push_back({std::string(url), std::string(simple)});
    index_.emplace(std::move(key), id);
    eqs_.emplace_back();
    defined_.push_back(false);
    generated_.push_back(false);
    return id;
}

std::optional<NameId> EquationSystem::find(const SetName& name) const {
    auto it = index_.find(name.full());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

LabelId EquationSystem::label(std::string_view text) {
    auto it = label_index_.find(std::string(text));
    if (it != label_index_.end()) return it->second;
    auto id = static_cast<LabelId>(labels_.size());
    labels_.emplace_back(text);
    label_index_.emplace(std::string(text), id);
    return id;
}

std::optional<LabelId> EquationSystem::find_label(std::string_view text) const {
    auto it = label_index_.find(std::string(text));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

const FlatExpr& EquationSystem::equation(NameId id) const {
    if (!defined(id)) throw Error("referenced set name " + full_name(id) + " is undefined");
    return eqs_[id];
}

void EquationSystem::define(NameId id, FlatExpr expr) {
    if (defined_[id]) throw Error("duplicate definition of set name " + full_name(id));
    eqs_[id] = std::move(expr);
    defined_[id] = true;
    order_.push_back(id);
}

void EquationSystem::define(const SetName& name, const std::vector<std::pair<std::string, SetName>>& elems) {
    FlatExpr expr;
    expr.reserve(elems.size());
    for (const auto& [l, m] : elems) expr.push_back({label(l), intern(m)});
    define(intern(name), std::move(expr));
}

void EquationSystem::mark_generated(NameId id) {
    generated_[id] = true;
}

NameId EquationSystem::fresh_name(std::string_view hint) {
    return fresh_name_in(kSessionUrl, hint);
}

NameId EquationSystem::fresh_name_in(std::string_view url, std::string_view hint) {
    std::string key = std::string(url) + "#" + std::string(hint);
    auto& counter = fresh_counters_[key];
    std::string simple;
    for (;;) {
        simple = counter == 0 ? std::string(hint) : std::string(hint) + std::to_string(counter - 1);
        ++counter;
        if (!find(SetName{std::string(url), simple})) break;
    }
    NameId id = intern(url, simple);
    generated_[id] = true;
    return id;
}

NameId EquationSystem::empty_set() {
    if (!empty_) {
        NameId id = intern(kSessionUrl, "empty");
        generated_[id] = true;
        if (!defined(id)) define(id, {});
        empty_ = id;
    }
    return *empty_;
}

NameId EquationSystem::atom(std::string_view label_text) {
    LabelId l = label(label_text);
    auto it = atoms_.find(l);
    if (it != atoms_.end()) return it->second;
    NameId e = empty_set();
    NameId id = fresh_name("atom");
    define(id, {Elem{l, e}});
    atoms_.emplace(l, id);
    return id;
}

std::vector<NameId> EquationSystem::merge(const EquationSystem& other) {
    std::vector<NameId> map(other.name_count());
    for (NameId i = 0; i < other.name_count(); ++i) {
        map[i] = intern(other.name(i));
        if (other.generated(i)) generated_[map[i]] = true;
    }
    std::vector<LabelId> lmap(other.label_count());
    for (LabelId i = 0; i < other.label_count(); ++i) lmap[i] = label(other.label_text(i));
    for (NameId i : other.defined_names()) {
        FlatExpr e;
        e.reserve(other.equation(i).size());
        for (const auto& el : other.equation(i)) e.push_back({lmap[el.label], map[el.member]});
        define(map[i], std::move(e));
    }
    return map;
}

namespace {

NameId flatten_into(EquationSystem& sys, const NestedExpr& e, const std::string& url) {
    if (e.ref) return sys.intern(*e.ref);
    FlatExpr flat;
    for (const auto& [l, sub] : e.elems) flat.push_back({sys.label(l), flatten_into(sys, sub, url)});
    NameId id = sys.fresh_name_in(url, "f");
    sys.define(id, std::move(flat));
    return id;
}

}  // namespace

EquationSystem flatten(const std::vector<std::pair<SetName, NestedExpr>>& nested) {
    EquationSystem sys;
    for (const auto& [name, _] : nested) sys.intern(name);
    for (const auto& [name, e] : nested) {
        if (e.ref) throw Error("equation for " + name.full() + " must be a bracket expression");
        FlatExpr flat;
        for (const auto& [l, sub] : e.elems) flat.push_back({sys.label(l), flatten_into(sys, sub, name.document_url)});
        sys.define(sys.intern(name), std::move(flat));
    }
    return sys;
}

}  // namespace hwdb
