#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hwdb/names.hpp"
#include "hwdb/parse_tree.hpp"

namespace hwdb {

struct Diagnostic {
    std::uint32_t pos = 0;  // 0-based character offset into the source
    std::uint32_t end = 0;
    std::string message;
};

class ParseError : public Error {
public:
    ParseError(std::uint32_t pos, const std::string& msg) : Error(msg), pos(pos) {}
    std::uint32_t pos;
};

std::vector<Token> tokenize(std::string_view source);

struct ParseResult {
    std::string source;
    NodePtr tree;
    // Identifier occurrences that are not declarations, in source order.
    std::vector<Node*> identifier_nodes;
    // Bounding term/formula nodes of binders -> identifier occurrences beneath them.
    std::map<const Node*, std::vector<Node*>> btflvn_sublists;
};

// Parses one top-level command (terminated by ';'). Throws ParseError at the furthest failure.
ParseResult parse(std::string_view source);
// Parses a bare declaration list "d1, d2, ...".
ParseResult parse_declarations(std::string_view source);

// Re-establishes parent links and the identifier lists after the tree was built or edited.
void index_tree(ParseResult& pr);

}  // namespace hwdb
