#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hwdb {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a fact contradicts an earlier fact; indicates a bug, never user error.
class InternalError : public Error {
public:
    using Error::Error;
};

inline constexpr std::string_view kNullLabel = "null";
inline constexpr std::string_view kSessionUrl = "local://session";
inline constexpr std::string_view kWdbNamespace = "http://www.csc.liv.ac.uk/~molyneux/XML-WDB";

// Identifier charset: alphanumerics, '_' and '-'.
bool is_identifier(std::string_view s);

struct SetName {
    std::string document_url;
    std::string simple;

    std::string full() const { return document_url + "#" + simple; }
    auto operator<=>(const SetName&) const = default;
    bool operator==(const SetName&) const = default;
};

// Accepts "url#simple" or a bare simple name resolved against base_url.
SetName parse_set_name(std::string_view text, std::string_view base_url);

// "dir/BibDB-f1.xml" -> "dir/BibDB-f1.approximation.xml".
std::string approximation_url(std::string_view document_url);

// Labels compare by code point; UTF-8 byte order coincides with that.
inline int compare_labels(std::string_view a, std::string_view b) {
    int c = a.compare(b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace hwdb
