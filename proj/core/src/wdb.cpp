#include "hwdb/wdb.hpp"

#include "hwdb/xml_wdb.hpp"

namespace hwdb {

const FlatExpr& Wdb::lookup_equation(NameId id) {
    if (sys_.defined(id)) return sys_.equation(id);
    const SetName& name = sys_.name(id);
    if (name.document_url == kSessionUrl || document_loaded(name.document_url))
        throw Error("referenced set name " + name.full() + " is undefined");
    const std::string url = name.document_url;
    load_document(url);
    if (!sys_.defined(id)) throw Error("referenced set name " + sys_.full_name(id) + " is undefined");
    return sys_.equation(id);
}

void Wdb::load_document(const std::string& url_ref) {
    const std::string url = url_ref;
    if (document_loaded(url)) return;
    if (!fetcher_) throw FetchError("no fetcher configured for " + url);
    std::string body = fetch_counted(url);
    EquationSystem doc = load_xml_wdb(body, url);
    sys_.merge(doc);
    loaded_.insert(url);
    if (on_document_loaded) on_document_loaded(url);
}

std::optional<std::string> Wdb::try_fetch(const std::string& url) {
    if (!fetcher_) return std::nullopt;
    try {
        return fetch_counted(url);
    } catch (const FetchError&) {
        return std::nullopt;
    }
}

std::string Wdb::fetch_counted(const std::string& url) {
    ++fetch_count_;
    ++fetches_[url];
    return fetcher_->fetch(url);
}

}  // namespace hwdb
