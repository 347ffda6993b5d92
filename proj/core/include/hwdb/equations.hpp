#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hwdb/names.hpp"

namespace hwdb {

using NameId = std::uint32_t;
using LabelId = std::uint32_t;

struct Elem {
    LabelId label;
    NameId member;
    bool operator==(const Elem&) const = default;
};

// Ordered for I/O fidelity only; consumers must ignore order and repetition.
using FlatExpr = std::vector<Elem>;

// A system of flat set equations over interned names and labels.
class EquationSystem {
public:
    EquationSystem();

    NameId intern(const SetName& name);
    NameId intern(std::string_view url, std::string_view simple);
    std::optional<NameId> find(const SetName& name) const;
    const SetName& name(NameId id) const { return names_[id]; }
    std::string full_name(NameId id) const { return names_[id].full(); }
    std::size_t name_count() const { return names_.size(); }

    LabelId label(std::string_view text);
    std::optional<LabelId> find_label(std::string_view text) const;
    const std::string& label_text(LabelId id) const { return labels_[id]; }
    std::size_t label_count() const { return labels_.size(); }

    bool defined(NameId id) const { return id < eqs_.size() && defined_[id]; }
    const FlatExpr& equation(NameId id) const;
    // Throws on a second definition of the same name.
    void define(NameId id, FlatExpr expr);
    void define(const SetName& name, const std::vector<std::pair<std::string, SetName>>& elems);
    // Definition order.
    const std::vector<NameId>& defined_names() const { return order_; }

    // Names minted by the system itself (session results, XML nesting) rather than declared.
    bool generated(NameId id) const { return id < generated_.size() && generated_[id]; }
    void mark_generated(NameId id);

    // Next unused name under the session URL: hint, hint0, hint1, ...
    NameId fresh_name(std::string_view hint);
    // Same sequence under an arbitrary document URL.
    NameId fresh_name_in(std::string_view url, std::string_view hint);

    // Shared session equation "empty = {}".
    NameId empty_set();
    // Session equation {X:empty} for the atomic value "X", reused per label.
    NameId atom(std::string_view label_text);

    // Copies every equation of other into this system; returns other-id -> this-id.
    std::vector<NameId> merge(const EquationSystem& other);

private:
    std::vector<SetName> names_;
    std::unordered_map<std::string, NameId> index_;
    std::vector<FlatExpr> eqs_;
    std::vector<bool> defined_;
    std::vector<bool> generated_;
    std::vector<NameId> order_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, LabelId> label_index_;
    std::unordered_map<std::string, unsigned> fresh_counters_;
    std::optional<NameId> empty_;
    std::unordered_map<LabelId, NameId> atoms_;
};

// Bracket expression with nesting allowed: either a reference or a bracket of labelled parts.
struct NestedExpr {
    std::optional<SetName> ref;
    std::vector<std::pair<std::string, NestedExpr>> elems;

    static NestedExpr name(SetName n) { NestedExpr e; e.ref = std::move(n); return e; }
    static NestedExpr bracket(std::vector<std::pair<std::string, NestedExpr>> parts) {
        NestedExpr e; e.elems = std::move(parts); return e;
    }
};

// Replaces every nested bracket with a fresh name (hint "f") in the owning document.
EquationSystem flatten(const std::vector<std::pair<SetName, NestedExpr>>& nested);

}  // namespace hwdb
