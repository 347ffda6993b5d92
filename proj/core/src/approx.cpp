#include "hwdb/approx.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "hwdb/xml.hpp"

namespace hwdb {

namespace {

std::pair<NameId, NameId> ordered(NameId a, NameId b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

// Least fixpoint of: x ≉ y if some l:x' in x has no l:y' in y with x' ≉ y' unknown (and symmetrically).
void saturate(const Fragment& f, NamePairs& neg) {
    const EquationSystem& sys = *f.sys;
    auto distinct = [&](NameId a, NameId b) { return a != b && neg.count(ordered(a, b)) != 0; };
    auto refutes = [&](const FlatExpr& u, const FlatExpr& v) {
        for (const auto& a : u) {
            bool alive = false;
            for (const auto& b : v)
                if (a.label == b.label && !distinct(a.member, b.member)) { alive = true; break; }
            if (!alive) return true;
        }
        return false;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < f.L.size(); ++i) {
            for (std::size_t j = i + 1; j < f.L.size(); ++j) {
                NameId x = f.L[i], y = f.L[j];
                if (neg.count(ordered(x, y))) continue;
                const auto& ex = sys.equation(x);
                const auto& ey = sys.equation(y);
                if (refutes(ex, ey) || refutes(ey, ex)) {
                    neg.insert(ordered(x, y));
                    changed = true;
                }
            }
        }
    }
}

}  // namespace

Fragment make_fragment(const EquationSystem& sys, const std::string& url) {
    Fragment f;
    f.url = url;
    f.sys = &sys;
    std::unordered_set<NameId> seen;
    for (NameId n : sys.defined_names()) {
        if (sys.name(n).document_url != url) continue;
        f.L.push_back(n);
        if (!sys.generated(n)) f.declared.push_back(n);
    }
    for (NameId n : f.L)
        if (seen.insert(n).second) f.L_prime.push_back(n);
    for (NameId n : f.L)
        for (const auto& el : sys.equation(n))
            if (seen.insert(el.member).second) f.L_prime.push_back(el.member);
    return f;
}

NamePairs upper_approx(const Fragment& f) {
    NamePairs neg;
    saturate(f, neg);
    return neg;
}

NamePairs lower_approx(const Fragment& f) {
    NamePairs neg;
    std::unordered_set<NameId> local(f.L.begin(), f.L.end());
    for (std::size_t i = 0; i < f.L_prime.size(); ++i)
        for (std::size_t j = i + 1; j < f.L_prime.size(); ++j) {
            NameId x = f.L_prime[i], y = f.L_prime[j];
            if (!local.count(x) || !local.count(y)) neg.insert(ordered(x, y));
        }
    saturate(f, neg);
    return neg;
}

std::vector<ApproxFact> simple_approx(const Fragment& f) {
    auto upper = upper_approx(f);
    auto lower = lower_approx(f);
    std::vector<ApproxFact> out;
    const EquationSystem& sys = *f.sys;
    for (std::size_t i = 0; i < f.declared.size(); ++i)
        for (std::size_t j = i + 1; j < f.declared.size(); ++j) {
            auto p = ordered(f.declared[i], f.declared[j]);
            if (upper.count(p)) out.push_back({sys.full_name(f.declared[i]), sys.full_name(f.declared[j]), false});
            else if (!lower.count(p)) out.push_back({sys.full_name(f.declared[i]), sys.full_name(f.declared[j]), true});
        }
    return out;
}

std::string write_approx_file(const std::vector<std::string>& group_order, const std::vector<ApproxFact>& facts) {
    std::ostringstream out;
    out << "<simple-approximation>\n\n";
    for (const auto& g : group_order) {
        out << "  <facts set_name=\"" << xml_escape(g) << "\">\n";
        for (const auto& fact : facts)
            if (fact.x == g)
                out << "    <fact set_name=\"" << xml_escape(fact.y) << "\" value=\"" << (fact.yes ? "yes" : "no")
                    << "\"/>\n";
        out << "  </facts>\n\n";
    }
    out << "</simple-approximation>\n";
    return out.str();
}

std::string write_approx_file(const Fragment& f, const std::vector<ApproxFact>& facts) {
    std::vector<std::string> groups;
    for (NameId n : f.declared) groups.push_back(f.sys->full_name(n));
    return write_approx_file(groups, facts);
}

std::vector<ApproxFact> read_approx_file(std::string_view content) {
    XmlNode root = parse_xml(content);
    if (root.local != "simple-approximation") throw Error("approximation file root must be simple-approximation");
    auto attr = [](const XmlNode& n, std::string_view name) -> const std::string* {
        for (const auto& a : n.attrs)
            if (a.local == name) return &a.value;
        return nullptr;
    };
    std::vector<ApproxFact> out;
    for (const auto* group : root.elements()) {
        if (group->local != "facts") throw Error("unexpected element " + group->qname() + " in approximation file");
        const std::string* x = attr(*group, "set_name");
        if (!x) throw Error("facts element without set_name");
        for (const auto* fact : group->elements()) {
            const std::string* y = attr(*fact, "set_name");
            const std::string* v = attr(*fact, "value");
            if (fact->local != "fact" || !y || !v || (*v != "yes" && *v != "no"))
                throw Error("malformed fact in approximation file (line " + std::to_string(fact->line) + ")");
            out.push_back({*x, *y, *v == "yes"});
        }
    }
    return out;
}

}  // namespace hwdb
