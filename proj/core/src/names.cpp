#include "hwdb/names.hpp"

#include <cctype>

namespace hwdb {

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (unsigned char c : s) {
        if (!(std::isalnum(c) || c == '_' || c == '-')) return false;
    }
    return true;
}

SetName parse_set_name(std::string_view text, std::string_view base_url) {
    auto hash = text.rfind('#');
    if (hash == std::string_view::npos) {
        if (text.find('/') != std::string_view::npos || text.find(':') != std::string_view::npos)
            throw Error("malformed set name '" + std::string(text) + "': missing '#' separator");
        if (!is_identifier(text))
            throw Error("illegal identifier '" + std::string(text) + "'");
        return {std::string(base_url), std::string(text)};
    }
    auto url = text.substr(0, hash);
    auto simple = text.substr(hash + 1);
    if (url.empty()) throw Error("malformed set name '" + std::string(text) + "': empty document URL");
    for (unsigned char c : url) {
        if (std::isspace(c)) throw Error("malformed set name '" + std::string(text) + "': whitespace in URL");
    }
    if (!is_identifier(simple))
        throw Error("illegal identifier '" + std::string(simple) + "' in set name '" + std::string(text) + "'");
    return {std::string(url), std::string(simple)};
}

std::string approximation_url(std::string_view document_url) {
    std::string url(document_url);
    constexpr std::string_view ext = ".xml";
    if (url.size() >= ext.size() && url.compare(url.size() - ext.size(), ext.size(), ext) == 0)
        return url.substr(0, url.size() - ext.size()) + ".approximation.xml";
    return url + ".approximation.xml";
}

}  // namespace hwdb
