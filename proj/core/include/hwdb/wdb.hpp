#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>

#include "hwdb/equations.hpp"
#include "hwdb/fetch.hpp"

namespace hwdb {

// Session view of the WDB: an equation cache filled lazily, one document at a time.
class Wdb {
public:
    explicit Wdb(Fetcher* fetcher) : fetcher_(fetcher) {}

    EquationSystem& sys() { return sys_; }
    const EquationSystem& sys() const { return sys_; }
    Fetcher* fetcher() const { return fetcher_; }

    // Returns the equation, fetching the defining document on first use.
    const FlatExpr& lookup_equation(NameId id);
    NameId intern(const SetName& n) { return sys_.intern(n); }

    void load_document(const std::string& url);
    bool document_loaded(const std::string& url) const { return loaded_.count(url) != 0; }
    const std::set<std::string>& loaded_documents() const { return loaded_; }

    // Fetch that tolerates absence (approximation files); counted like any other fetch.
    std::optional<std::string> try_fetch(const std::string& url);

    std::size_t fetch_count() const { return fetch_count_; }
    const std::map<std::string, unsigned>& fetches() const { return fetches_; }

    // Called after each document's equations are merged into the cache.
    std::function<void(const std::string& url)> on_document_loaded;

private:
    std::string fetch_counted(const std::string& url);

    Fetcher* fetcher_;
    EquationSystem sys_;
    std::set<std::string> loaded_;
    std::map<std::string, unsigned> fetches_;
    std::size_t fetch_count_ = 0;
};

}  // namespace hwdb
