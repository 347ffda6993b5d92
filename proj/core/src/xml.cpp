#include "hwdb/xml.hpp"

#include <expat.h>

#include <cctype>
#include <memory>

#include "hwdb/names.hpp"

namespace hwdb {

namespace {

constexpr char kSep = '\x1f';

void split_name(const char* raw, std::string& ns, std::string& local, std::string& prefix) {
    std::string_view s(raw);
    auto a = s.find(kSep);
    if (a == std::string_view::npos) {
        ns.clear();
        prefix.clear();
        local = std::string(s);
        return;
    }
    ns = std::string(s.substr(0, a));
    auto rest = s.substr(a + 1);
    auto b = rest.find(kSep);
    if (b == std::string_view::npos) {
        local = std::string(rest);
        prefix.clear();
    } else {
        local = std::string(rest.substr(0, b));
        prefix = std::string(rest.substr(b + 1));
    }
}

struct Builder {
    XML_Parser parser;
    XmlNode root;
    std::vector<XmlNode*> stack;
    bool have_root = false;

    static void on_start(void* ud, const XML_Char* name, const XML_Char** atts) {
        auto* self = static_cast<Builder*>(ud);
        XmlNode node;
        split_name(name, node.ns, node.local, node.prefix);
        node.line = static_cast<int>(XML_GetCurrentLineNumber(self->parser));
        for (int i = 0; atts[i]; i += 2) {
            XmlAttr a;
            split_name(atts[i], a.ns, a.local, a.prefix);
            a.value = atts[i + 1];
            node.attrs.push_back(std::move(a));
        }
        if (self->stack.empty()) {
            self->root = std::move(node);
            self->have_root = true;
            self->stack.push_back(&self->root);
        } else {
            auto& kids = self->stack.back()->children;
            kids.push_back(std::move(node));
            self->stack.push_back(&kids.back());
        }
    }

    static void on_end(void* ud, const XML_Char*) {
        static_cast<Builder*>(ud)->stack.pop_back();
    }

    static void on_text(void* ud, const XML_Char* s, int len) {
        auto* self = static_cast<Builder*>(ud);
        if (self->stack.empty()) return;
        auto& kids = self->stack.back()->children;
        if (!kids.empty() && kids.back().is_text) {
            kids.back().text.append(s, static_cast<std::size_t>(len));
            return;
        }
        XmlNode t;
        t.is_text = true;
        t.text.assign(s, static_cast<std::size_t>(len));
        t.line = static_cast<int>(XML_GetCurrentLineNumber(self->parser));
        kids.push_back(std::move(t));
    }
};

}  // namespace

const XmlAttr* XmlNode::attr(std::string_view ns_uri, std::string_view local_name) const {
    for (const auto& a : attrs)
        if (a.ns == ns_uri && a.local == local_name) return &a;
    return nullptr;
}

std::vector<const XmlNode*> XmlNode::elements() const {
    std::vector<const XmlNode*> out;
    for (const auto& c : children)
        if (!c.is_text) out.push_back(&c);
    return out;
}

XmlNode parse_xml(std::string_view content) {
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> p(
        XML_ParserCreateNS(nullptr, kSep), &XML_ParserFree);
    if (!p) throw Error("cannot create XML parser");
    Builder b;
    b.parser = p.get();
    XML_SetReturnNSTriplet(p.get(), 1);
    XML_SetUserData(p.get(), &b);
    XML_SetElementHandler(p.get(), &Builder::on_start, &Builder::on_end);
    XML_SetCharacterDataHandler(p.get(), &Builder::on_text);
    if (XML_Parse(p.get(), content.data(), static_cast<int>(content.size()), 1) == XML_STATUS_ERROR) {
        throw Error("XML parse error at line " + std::to_string(XML_GetCurrentLineNumber(p.get())) + ": " +
                    XML_ErrorString(XML_GetErrorCode(p.get())));
    }
    if (!b.have_root) throw Error("XML document has no root element");
    return std::move(b.root);
}

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

bool is_xml_name(std::string_view s) {
    if (s.empty()) return false;
    auto start = [](unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; };
    auto rest = [&](unsigned char c) { return start(c) || std::isdigit(c) || c == '-' || c == '.'; };
    if (!start(static_cast<unsigned char>(s[0]))) return false;
    for (unsigned char c : s.substr(1))
        if (!rest(c)) return false;
    // Names starting with "xml" (any case) are reserved.
    if (s.size() >= 3 && std::tolower(static_cast<unsigned char>(s[0])) == 'x' &&
        std::tolower(static_cast<unsigned char>(s[1])) == 'm' && std::tolower(static_cast<unsigned char>(s[2])) == 'l')
        return false;
    return true;
}

}  // namespace hwdb
