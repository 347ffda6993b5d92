#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hwdb {

struct XmlAttr {
    std::string ns;
    std::string local;
    std::string prefix;
    std::string value;
    std::string qname() const { return prefix.empty() ? local : prefix + ":" + local; }
};

// Minimal namespace-resolved DOM; text nodes keep raw character data.
struct XmlNode {
    bool is_text = false;
    std::string ns;
    std::string local;
    std::string prefix;
    std::vector<XmlAttr> attrs;
    std::vector<XmlNode> children;
    std::string text;
    int line = 0;

    std::string qname() const { return prefix.empty() ? local : prefix + ":" + local; }
    const XmlAttr* attr(std::string_view ns_uri, std::string_view local_name) const;
    std::vector<const XmlNode*> elements() const;
};

// Throws Error with the line number on malformed input.
XmlNode parse_xml(std::string_view content);

std::string xml_escape(std::string_view s);

bool is_xml_name(std::string_view s);

}  // namespace hwdb
