#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hwdb/equations.hpp"
#include "hwdb/xml.hpp"

namespace hwdb {

struct XmlWdbDocument {
    std::string source_url;
    XmlNode root;
    std::string ns = std::string(kWdbNamespace);
};

XmlWdbDocument read_xml_wdb(std::string_view content, std::string source_url,
                            std::string_view ns = kWdbNamespace);

// Every violation of the document invariants; empty means valid.
std::vector<std::string> validate(const XmlWdbDocument& doc);

// Rules 1-5 followed by flattening. Names introduced for nested content are marked generated.
EquationSystem to_equations(const XmlWdbDocument& doc);

// Writes every equation whose name lives in target_url; labels must be XML names.
XmlWdbDocument from_equations(const EquationSystem& sys, const std::string& target_url);

std::string write_xml(const XmlNode& root);
inline std::string write_xml_wdb(const XmlWdbDocument& doc) { return write_xml(doc.root); }

// read + validate (throws on the first violations) + to_equations.
EquationSystem load_xml_wdb(std::string_view content, const std::string& url);

}  // namespace hwdb
