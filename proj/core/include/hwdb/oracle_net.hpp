#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "hwdb/bisim.hpp"

namespace hwdb {

using AnswerFn = std::function<Answer(const std::string& x, const std::string& y)>;

// One protocol line: "ASK <x> <y>" -> "YES|NO|UNKNOWN <x> <y>"; anything else -> "ERROR <reason>".
std::string handle_request(std::string_view line, const AnswerFn& answer);

struct ParsedReply {
    Answer answer = Answer::Unknown;
    std::string x;
    std::string y;
};
std::optional<ParsedReply> parse_reply(std::string_view line);

// Newline-delimited text service over TCP; each connection is served on the I/O thread.
class OracleServer {
public:
    // port 0 picks a free port.
    OracleServer(AnswerFn answer, const std::string& host, std::uint16_t port);
    ~OracleServer();
    OracleServer(const OracleServer&) = delete;
    OracleServer& operator=(const OracleServer&) = delete;

    std::uint16_t port() const;
    // Serves on a background thread until stop().
    void start();
    // Serves on the calling thread until stop() is called from elsewhere.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Blocking client; "host:port" endpoint. Reconnects lazily after a failure.
class TcpOracleClient : public OracleClient {
public:
    explicit TcpOracleClient(const std::string& endpoint);
    ~TcpOracleClient() override;

    Answer ask(const SetName& x, const SetName& y) override;
    Answer ask(const std::string& x, const std::string& y);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace hwdb
