#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hwdb/parser.hpp"

namespace hwdb {

// Binder node, declaring identifier node, occurrence; decl is null when undeclared.
struct DeclTriple {
    Node* binder = nullptr;
    Node* decl = nullptr;
    Node* occurrence = nullptr;
};

DeclTriple ids_search(Node* occurrence);

// Bottom-up category repair against the fork table; returns the diagnostics (empty on success).
std::vector<Diagnostic> scr_relabel(Node& root);

struct Analysis {
    std::vector<Diagnostic> errors;
    bool undeclared = false;  // errors are undeclared-identifier reports
    int slots = 0;            // number of evaluation slots assigned from slot_base
    bool ok() const { return errors.empty(); }
};

// Resolves identifiers, relabels categories, checks call arity and boundedness, assigns slots.
Analysis analyze(ParseResult& pr, int slot_base = 0);

// A query with the library declarations wrapped around its body: "q let d1, ..., dn in body endlet;".
struct WrappedQuery {
    std::string source;
    std::uint32_t body_begin = 0;
    std::uint32_t body_end = 0;  // in the original source
    std::uint32_t prefix_len = 0;
    std::uint32_t suffix_len = 0;
    // Offset in the original source, or nothing when pos falls inside the inserted library text.
    std::optional<std::uint32_t> map_back(std::uint32_t pos) const;
};

WrappedQuery expand_library(std::string_view query_source, const std::vector<std::string>& library);

}  // namespace hwdb
