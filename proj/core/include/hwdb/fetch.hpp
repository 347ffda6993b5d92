#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "hwdb/names.hpp"

namespace hwdb {

class FetchError : public Error {
public:
    using Error::Error;
};

class Fetcher {
public:
    virtual ~Fetcher() = default;
    // Returns the document body or throws FetchError.
    virtual std::string fetch(const std::string& url) = 0;
};

// file:// and plain paths from disk, http(s) through libcurl.
class DefaultFetcher : public Fetcher {
public:
    struct Options {
        bool network = true;
        // URL prefix rewrites applied before fetching, first match wins.
        std::vector<std::pair<std::string, std::string>> rewrites;
    };

    DefaultFetcher() = default;
    explicit DefaultFetcher(Options opts) : opts_(std::move(opts)) {}

    std::string fetch(const std::string& url) override;
    std::string resolve(const std::string& url) const;

private:
    Options opts_;
};

// In-memory documents keyed by URL; used by tests and the experiment harness.
class MemoryFetcher : public Fetcher {
public:
    void put(std::string url, std::string body);
    std::string fetch(const std::string& url) override;
    bool contains(const std::string& url) const;

private:
    mutable std::mutex mu_;
    std::map<std::string, std::string> docs_;
};

std::string read_file(const std::string& path);

}  // namespace hwdb
