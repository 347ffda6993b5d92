#include "hwdb/fetch.hpp"

#include <curl/curl.h>

#include <fstream>
#include <memory>
#include <sstream>

namespace hwdb {

namespace {

bool starts_with(const std::string& s, std::string_view p) {
    return s.size() >= p.size() && s.compare(0, p.size(), p) == 0;
}

std::string file_path_of(const std::string& url) {
    std::string rest = url.substr(7);  // after "file://"
    // file:///abs, file://localhost/abs, file://C:/x, file://relative/path
    if (starts_with(rest, "localhost/")) return rest.substr(9);
    return rest;
}

std::size_t collect_body(char* data, std::size_t size, std::size_t n, void* ud) {
    static_cast<std::string*>(ud)->append(data, size * n);
    return size * n;
}

std::string http_get(const std::string& url) {
    static const bool initialised = [] { return curl_global_init(CURL_GLOBAL_DEFAULT) == CURLE_OK; }();
    if (!initialised) throw FetchError("cannot initialise HTTP client");
    std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> h(curl_easy_init(), &curl_easy_cleanup);
    if (!h) throw FetchError("cannot create HTTP handle");
    std::string body;
    curl_easy_setopt(h.get(), CURLOPT_URL, url.c_str());
    curl_easy_setopt(h.get(), CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(h.get(), CURLOPT_WRITEFUNCTION, &collect_body);
    curl_easy_setopt(h.get(), CURLOPT_WRITEDATA, &body);
    curl_easy_setopt(h.get(), CURLOPT_TIMEOUT, 30L);
    CURLcode rc = curl_easy_perform(h.get());
    if (rc != CURLE_OK) throw FetchError("cannot fetch " + url + ": " + curl_easy_strerror(rc));
    long status = 0;
    curl_easy_getinfo(h.get(), CURLINFO_RESPONSE_CODE, &status);
    if (status >= 400) throw FetchError("cannot fetch " + url + ": HTTP status " + std::to_string(status));
    return body;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FetchError("cannot open file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string DefaultFetcher::resolve(const std::string& url) const {
    for (const auto& [from, to] : opts_.rewrites)
        if (starts_with(url, from)) return to + url.substr(from.size());
    return url;
}

std::string DefaultFetcher::fetch(const std::string& original) {
    std::string url = resolve(original);
    if (starts_with(url, "file://")) return read_file(file_path_of(url));
    if (starts_with(url, "http://") || starts_with(url, "https://")) {
        if (!opts_.network) throw FetchError("network disabled: cannot fetch " + original);
        return http_get(url);
    }
    if (url.find("://") != std::string::npos) throw FetchError("unsupported URL scheme: " + original);
    return read_file(url);
}

void MemoryFetcher::put(std::string url, std::string body) {
    std::lock_guard lk(mu_);
    docs_[std::move(url)] = std::move(body);
}

std::string MemoryFetcher::fetch(const std::string& url) {
    std::lock_guard lk(mu_);
    auto it = docs_.find(url);
    if (it == docs_.end()) throw FetchError("no such document: " + url);
    return it->second;
}

bool MemoryFetcher::contains(const std::string& url) const {
    std::lock_guard lk(mu_);
    return docs_.count(url) != 0;
}

}  // namespace hwdb
