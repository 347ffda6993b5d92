#include "hwdb/render.hpp"

#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace hwdb {

namespace {

class Renderer {
public:
    Renderer(const EquationSystem& sys, NameId root) : sys_(sys), root_(root) {
        walk(root);
        for (NameId n : order_)
            if (refs_[n] == 1 && !cyclic(n)) inlined_.insert(n);
    }

    std::string render() const {
        std::string out = "Result = " + bracket(root_, 0);
        for (NameId n : order_)
            if (n != root_ && !inlined_.count(n)) out += "\n\n" + sys_.name(n).simple + " = " + bracket(n, 0);
        return out;
    }

private:
    bool session(NameId n) const { return sys_.name(n).document_url == kSessionUrl && sys_.defined(n); }
    bool empty_shape(NameId n) const { return sys_.generated(n) && sys_.defined(n) && sys_.equation(n).empty(); }
    std::optional<std::string> atom_shape(NameId n) const {
        if (!sys_.generated(n) || !sys_.defined(n)) return std::nullopt;
        const auto& e = sys_.equation(n);
        if (e.size() != 1 || !empty_shape(e[0].member)) return std::nullopt;
        return sys_.label_text(e[0].label);
    }
    bool sugar(NameId n) const { return n != root_ && (empty_shape(n) || atom_shape(n)); }
    // Session names that print as their own equation or inline bracket.
    bool structural(NameId n) const { return session(n) && !sugar(n); }

    void walk(NameId n) {
        if (!visited_.insert(n).second) return;
        order_.push_back(n);
        for (const auto& e : sys_.equation(n)) {
            if (!structural(e.member)) continue;
            ++refs_[e.member];
            walk(e.member);
        }
    }

    bool cyclic(NameId start) const {
        std::unordered_set<NameId> seen;
        std::function<bool(NameId)> reach = [&](NameId n) {
            for (const auto& e : sys_.equation(n)) {
                if (!structural(e.member) || e.member == root_) continue;
                if (e.member == start) return true;
                if (seen.insert(e.member).second && reach(e.member)) return true;
            }
            return false;
        };
        return reach(start);
    }

    std::string value(NameId n, int indent) const {
        if (n == root_) return "Result";
        if (empty_shape(n)) return "{}";
        if (auto a = atom_shape(n)) return "\"" + *a + "\"";
        if (inlined_.count(n)) return bracket(n, indent);
        if (session(n)) return sys_.name(n).simple;
        return sys_.full_name(n);
    }

    std::string bracket(NameId n, int indent) const {
        const auto& e = sys_.equation(n);
        if (e.empty()) return "{}";
        std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
        std::string out = "{\n";
        for (std::size_t i = 0; i < e.size(); ++i) {
            out += pad + "'" + sys_.label_text(e[i].label) + "':" + value(e[i].member, indent + 2);
            out += i + 1 < e.size() ? ",\n" : "\n";
        }
        out += std::string(static_cast<std::size_t>(indent), ' ') + "}";
        return out;
    }

    const EquationSystem& sys_;
    NameId root_;
    std::vector<NameId> order_;
    std::unordered_set<NameId> visited_;
    std::unordered_map<NameId, int> refs_;
    std::unordered_set<NameId> inlined_;
};

}  // namespace

std::string render_result(const EquationSystem& sys, const QueryResult& r) {
    if (r.boolean) return std::string("Result = ") + (r.truth ? "true" : "false");
    return Renderer(sys, r.root).render();
}

}  // namespace hwdb
