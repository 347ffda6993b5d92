#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hwdb {

// Source text of the predefined declarations, comma-separated in declaration order.
std::string_view predefined_library_source();

struct LibraryEntry {
    std::string text;     // declaration source
    std::string summary;  // e.g. "set query Pair (set x,set y)"
};

// Splits a declaration list into entries; throws ParseError on malformed input.
std::vector<LibraryEntry> split_declarations(std::string_view source);

const std::vector<LibraryEntry>& predefined_library();

}  // namespace hwdb
