#include "hwdb/oracle_net.hpp"

#include <boost/asio.hpp>
#include <sstream>
#include <thread>

namespace hwdb {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(tcp::socket socket, const AnswerFn& answer) : socket_(std::move(socket)), answer_(answer) {}

    void start() { read(); }

private:
    void read() {
        auto self = shared_from_this();
        asio::async_read_until(socket_, buf_, '\n', [this, self](boost::system::error_code ec, std::size_t n) {
            if (ec) return;
            std::string line(asio::buffers_begin(buf_.data()), asio::buffers_begin(buf_.data()) + static_cast<long>(n));
            buf_.consume(n);
            reply_ = handle_request(line, answer_) + "\n";
            asio::async_write(socket_, asio::buffer(reply_), [this, self](boost::system::error_code wec, std::size_t) {
                if (!wec) read();
            });
        });
    }

    tcp::socket socket_;
    const AnswerFn& answer_;
    asio::streambuf buf_;
    std::string reply_;
};

}  // namespace

std::string handle_request(std::string_view line, const AnswerFn& answer) {
    std::istringstream in{trim(line)};
    std::string verb, x, y, extra;
    in >> verb >> x >> y;
    if (verb != "ASK" || x.empty() || y.empty() || (in >> extra)) return "ERROR expected: ASK <set-name> <set-name>";
    try {
        return std::string(answer_text(answer(x, y))) + " " + x + " " + y;
    } catch (const std::exception& e) {
        return std::string("ERROR ") + e.what();
    }
}

std::optional<ParsedReply> parse_reply(std::string_view line) {
    std::istringstream in{trim(line)};
    std::string verb;
    ParsedReply r;
    if (!(in >> verb >> r.x >> r.y)) return std::nullopt;
    if (verb == "YES") r.answer = Answer::Yes;
    else if (verb == "NO") r.answer = Answer::No;
    else if (verb == "UNKNOWN") r.answer = Answer::Unknown;
    else return std::nullopt;
    return r;
}

struct OracleServer::Impl {
    Impl(AnswerFn fn, const std::string& host, std::uint16_t port)
        : answer(std::move(fn)), acceptor(io, tcp::endpoint(asio::ip::make_address(host), port)) {}

    void accept() {
        acceptor.async_accept([this](boost::system::error_code ec, tcp::socket socket) {
            if (ec) return;
            std::make_shared<Connection>(std::move(socket), answer)->start();
            accept();
        });
    }

    AnswerFn answer;
    asio::io_context io;
    tcp::acceptor acceptor;
    std::thread thread;
};

OracleServer::OracleServer(AnswerFn answer, const std::string& host, std::uint16_t port)
    : impl_(std::make_unique<Impl>(std::move(answer), host, port)) {
    impl_->accept();
}

OracleServer::~OracleServer() { stop(); }

std::uint16_t OracleServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void OracleServer::start() {
    impl_->thread = std::thread([this] { impl_->io.run(); });
}

void OracleServer::run() { impl_->io.run(); }

void OracleServer::stop() {
    impl_->io.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

struct TcpOracleClient::Impl {
    std::string host;
    std::string port;
    asio::io_context io;
    std::optional<tcp::socket> socket;
    asio::streambuf buf;

    void connect() {
        tcp::resolver resolver(io);
        socket.emplace(io);
        asio::connect(*socket, resolver.resolve(host, port));
    }
};

TcpOracleClient::TcpOracleClient(const std::string& endpoint) : impl_(std::make_unique<Impl>()) {
    auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon + 1 == endpoint.size())
        throw Error("oracle endpoint must be host:port, got \"" + endpoint + "\"");
    impl_->host = endpoint.substr(0, colon);
    impl_->port = endpoint.substr(colon + 1);
}

TcpOracleClient::~TcpOracleClient() = default;

Answer TcpOracleClient::ask(const SetName& x, const SetName& y) { return ask(x.full(), y.full()); }

Answer TcpOracleClient::ask(const std::string& x, const std::string& y) {
    try {
        if (!impl_->socket) impl_->connect();
        asio::write(*impl_->socket, asio::buffer("ASK " + x + " " + y + "\n"));
        std::size_t n = asio::read_until(*impl_->socket, impl_->buf, '\n');
        std::string line(asio::buffers_begin(impl_->buf.data()),
                         asio::buffers_begin(impl_->buf.data()) + static_cast<long>(n));
        impl_->buf.consume(n);
        auto r = parse_reply(line);
        if (!r) throw Error("oracle protocol error: " + trim(line));
        if (r->x != x || r->y != y) throw Error("oracle answered a different question: " + trim(line));
        return r->answer;
    } catch (const boost::system::system_error& e) {
        impl_->socket.reset();
        impl_->buf.consume(impl_->buf.size());
        throw Error("oracle connection to " + impl_->host + ":" + impl_->port + " failed: " + e.what());
    }
}

}  // namespace hwdb
