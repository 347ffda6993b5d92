#include "hwdb/xml_wdb.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace hwdb {

namespace {

constexpr std::string_view kXsiNamespace = "http://www.w3.org/2001/XMLSchema-instance";

bool blank(std::string_view s) {
    for (unsigned char c : s)
        if (!std::isspace(c)) return false;
    return true;
}

std::vector<std::string> tokens(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

std::string sanitize(std::string_view s) {
    std::string out;
    for (unsigned char c : s) out += (std::isalnum(c) || c == '_' || c == '-') ? static_cast<char>(c) : '_';
    return out;
}

bool is_special(const XmlNode& n, std::string_view ns) {
    return n.ns == ns && (n.local == "eqns" || n.local == "eqn");
}

void check_content(const XmlNode& el, const XmlWdbDocument& doc, const std::set<std::string>& ids,
                   std::vector<std::string>& out) {
    for (const auto& c : el.children) {
        if (c.is_text) continue;
        std::string where = " (line " + std::to_string(c.line) + ")";
        if (is_special(c, doc.ns)) {
            out.push_back("element " + c.qname() + " may not be nested inside equation content" + where);
            continue;
        }
        for (const auto& a : c.attrs) {
            if (a.ns != doc.ns) continue;
            if (a.local == "ref") {
                if (!is_identifier(a.value))
                    out.push_back("set:ref value '" + a.value + "' is not an identifier" + where);
                else if (!ids.count(a.value))
                    out.push_back("dangling set:ref '" + a.value + "'" + where);
            } else if (a.local == "href") {
                try {
                    auto n = parse_set_name(a.value, "");
                    if (n.document_url.empty()) throw Error("no URL");
                    if (a.value.find('#') == std::string::npos) throw Error("no #");
                } catch (const Error&) {
                    out.push_back("set:href value '" + a.value + "' is not a full set name" + where);
                }
            } else if (a.local == "id") {
                out.push_back("set:id may only appear on equation elements" + where);
            } else {
                out.push_back("unknown attribute " + a.qname() + where);
            }
        }
        check_content(c, doc, ids, out);
    }
}

struct Converter {
    const XmlWdbDocument& doc;
    EquationSystem sys;
    std::optional<NameId> empty;

    NameId empty_name() {
        if (!empty) {
            empty = sys.fresh_name_in(doc.source_url, "f_empty");
            sys.define(*empty, {});
        }
        return *empty;
    }

    // Labelled elements contributed by the content of el (attributes first, then children in order).
    FlatExpr content(const XmlNode& el, const std::string& path) {
        FlatExpr out;
        for (const auto& a : el.attrs) {
            if (a.ns == doc.ns) continue;
            FlatExpr value;
            for (const auto& t : tokens(a.value)) value.push_back({sys.label(t), empty_name()});
            out.push_back({sys.label(a.qname()), bracket(std::move(value), path + sanitize(a.local))});
        }
        for (const auto& c : el.children) {
            if (c.is_text) {
                for (const auto& t : tokens(c.text)) out.push_back({sys.label(t), empty_name()});
                continue;
            }
            LabelId l = sys.label(c.qname());
            const XmlAttr* ref = c.attr(doc.ns, "ref");
            const XmlAttr* href = c.attr(doc.ns, "href");
            std::string sub = path + sanitize(c.local);
            if (ref) out.push_back({l, sys.intern(doc.source_url, ref->value)});
            if (href) out.push_back({l, sys.intern(parse_set_name(href->value, doc.source_url))});
            FlatExpr inner = content(c, sub);
            if ((ref || href) && inner.empty()) continue;
            out.push_back({l, bracket(std::move(inner), sub)});
        }
        return out;
    }

    NameId bracket(FlatExpr e, const std::string& path) {
        if (e.empty()) return empty_name();
        NameId id = sys.fresh_name_in(doc.source_url, "f_" + path);
        sys.define(id, std::move(e));
        return id;
    }
};

void write_node(const XmlNode& n, std::ostringstream& out, int depth, bool root,
                const std::map<std::string, std::string>& decls) {
    std::string ind(static_cast<std::size_t>(depth) * 2, ' ');
    if (n.is_text) {
        out << ind << xml_escape(n.text) << "\n";
        return;
    }
    out << ind << "<" << n.qname();
    if (root)
        for (const auto& [prefix, uri] : decls) out << " xmlns:" << prefix << "=\"" << xml_escape(uri) << "\"";
    for (const auto& a : n.attrs) out << " " << a.qname() << "=\"" << xml_escape(a.value) << "\"";
    if (n.children.empty()) {
        out << "/>\n";
        return;
    }
    out << ">\n";
    for (const auto& c : n.children) {
        if (root) out << "\n";
        write_node(c, out, depth + 1, false, decls);
    }
    if (root) out << "\n";
    out << ind << "</" << n.qname() << ">\n";
}

void collect_prefixes(const XmlNode& n, std::map<std::string, std::string>& decls) {
    if (!n.prefix.empty()) decls[n.prefix] = n.ns;
    for (const auto& a : n.attrs)
        if (!a.prefix.empty()) decls[a.prefix] = a.ns;
    for (const auto& c : n.children) collect_prefixes(c, decls);
}

}  // namespace

XmlWdbDocument read_xml_wdb(std::string_view content, std::string source_url, std::string_view ns) {
    XmlWdbDocument doc;
    doc.source_url = std::move(source_url);
    doc.root = parse_xml(content);
    doc.ns = std::string(ns);
    return doc;
}

std::vector<std::string> validate(const XmlWdbDocument& doc) {
    std::vector<std::string> out;
    const XmlNode& root = doc.root;
    if (root.ns != doc.ns || root.local != "eqns") {
        out.push_back("root element must be eqns in namespace " + doc.ns + ", found " + root.qname());
        return out;
    }
    for (const auto& a : root.attrs)
        if (a.ns != kXsiNamespace) out.push_back("root element may not carry attribute " + a.qname());

    std::set<std::string> ids;
    for (const auto& c : root.children) {
        if (c.is_text) {
            if (!blank(c.text)) out.push_back("text content directly under the root (line " + std::to_string(c.line) + ")");
            continue;
        }
        if (!(c.ns == doc.ns && c.local == "eqn")) {
            out.push_back("root children must be eqn elements, found " + c.qname() + " (line " + std::to_string(c.line) + ")");
            continue;
        }
        const XmlAttr* id = c.attr(doc.ns, "id");
        if (!id) {
            out.push_back("eqn element without the required id attribute (line " + std::to_string(c.line) + ")");
        } else if (!is_identifier(id->value)) {
            out.push_back("id '" + id->value + "' is not an identifier (line " + std::to_string(c.line) + ")");
        } else if (!ids.insert(id->value).second) {
            out.push_back("duplicate id '" + id->value + "' (line " + std::to_string(c.line) + ")");
        }
        for (const auto& a : c.attrs)
            if (!(a.ns == doc.ns && a.local == "id"))
                out.push_back("eqn element may only carry the id attribute, found " + a.qname() + " (line " +
                              std::to_string(c.line) + ")");
    }
    for (const auto& c : root.children)
        if (!c.is_text && c.ns == doc.ns && c.local == "eqn") check_content(c, doc, ids, out);
    return out;
}

EquationSystem to_equations(const XmlWdbDocument& doc) {
    Converter cv{doc, {}, std::nullopt};
    std::vector<std::pair<NameId, const XmlNode*>> eqns;
    for (const auto* e : doc.root.elements()) {
        if (!(e->ns == doc.ns && e->local == "eqn")) continue;
        const XmlAttr* id = e->attr(doc.ns, "id");
        if (!id) continue;
        eqns.emplace_back(cv.sys.intern(doc.source_url, id->value), e);
    }
    for (const auto& [id, e] : eqns) {
        FlatExpr flat = cv.content(*e, sanitize(cv.sys.name(id).simple));
        cv.sys.define(id, std::move(flat));
    }
    return std::move(cv.sys);
}

XmlWdbDocument from_equations(const EquationSystem& sys, const std::string& target_url) {
    XmlWdbDocument doc;
    doc.source_url = target_url;
    doc.root.ns = doc.ns;
    doc.root.prefix = "set";
    doc.root.local = "eqns";
    for (NameId n : sys.defined_names()) {
        const SetName& name = sys.name(n);
        if (name.document_url != target_url) continue;
        if (!is_identifier(name.simple)) throw Error("set name " + name.full() + " is not serializable as an identifier");
        XmlNode eqn;
        eqn.ns = doc.ns;
        eqn.prefix = "set";
        eqn.local = "eqn";
        eqn.attrs.push_back({doc.ns, "id", "set", name.simple});
        for (const auto& el : sys.equation(n)) {
            const std::string& l = sys.label_text(el.label);
            if (!is_xml_name(l)) throw Error("label '" + l + "' is not serializable as an XML tag");
            const SetName& m = sys.name(el.member);
            XmlNode child;
            child.local = l;
            if (m.document_url == target_url) {
                if (!is_identifier(m.simple)) throw Error("set name " + m.full() + " is not serializable as an identifier");
                child.attrs.push_back({doc.ns, "ref", "set", m.simple});
            } else {
                child.attrs.push_back({doc.ns, "href", "set", m.full()});
            }
            eqn.children.push_back(std::move(child));
        }
        doc.root.children.push_back(std::move(eqn));
    }
    return doc;
}

std::string write_xml(const XmlNode& root) {
    std::map<std::string, std::string> decls;
    collect_prefixes(root, decls);
    std::ostringstream out;
    out << "<?xml version=\"1.0\"?>\n";
    write_node(root, out, 0, true, decls);
    return out.str();
}

EquationSystem load_xml_wdb(std::string_view content, const std::string& url) {
    auto doc = read_xml_wdb(content, url);
    auto problems = validate(doc);
    if (!problems.empty()) {
        std::string msg = "invalid XML-WDB document " + url + ":";
        for (const auto& p : problems) msg += "\n  " + p;
        throw Error(msg);
    }
    return to_equations(doc);
}

}  // namespace hwdb
