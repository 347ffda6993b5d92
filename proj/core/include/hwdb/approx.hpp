#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hwdb/equations.hpp"

namespace hwdb {

// One document viewed on its own: L are the names it defines, L_prime adds everything they reference.
struct Fragment {
    std::string url;
    const EquationSystem* sys = nullptr;
    std::vector<NameId> L;
    std::vector<NameId> declared;  // ids written in the document, in document order
    std::vector<NameId> L_prime;
};

Fragment make_fragment(const EquationSystem& sys, const std::string& url);

// Unordered pairs stored as (min, max).
using NamePairs = std::set<std::pair<NameId, NameId>>;

// x ≉₊ y over L: negative rule restricted to local equations; an empty label class on one side is a witness.
NamePairs upper_approx(const Fragment& f);
// x ≉₋ y over L′: distinct pairs touching a non-local name are a priori distinct, then the negative rule.
NamePairs lower_approx(const Fragment& f);

struct ApproxFact {
    std::string x;
    std::string y;
    bool yes;
    bool operator==(const ApproxFact&) const = default;
};

// Globally valid facts for declared pairs (x before y in document order).
std::vector<ApproxFact> simple_approx(const Fragment& f);

// Facts are grouped under their first name; groups appear in the given order, empty groups included.
std::string write_approx_file(const std::vector<std::string>& group_order, const std::vector<ApproxFact>& facts);
std::string write_approx_file(const Fragment& f, const std::vector<ApproxFact>& facts);
std::vector<ApproxFact> read_approx_file(std::string_view content);

}  // namespace hwdb
