#include "hwdb/session.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <istream>
#include <ostream>

#include "hwdb/render.hpp"

namespace hwdb {

namespace {

constexpr std::string_view kQueryOk = "Query is well-formed, well-typed and executable";
constexpr std::string_view kNotWellFormed = "Query is not well-formed";
constexpr std::string_view kNotWellTyped = "Query is well-formed, but not well-typed";
constexpr std::string_view kLibraryOk = "Library command is well-formed and well-typed, but not executable";
constexpr std::string_view kLibraryNotWellFormed = "Library command is not well-formed";
constexpr std::string_view kLibraryNotWellTyped = "Library command is well-formed, but not well-typed";
constexpr std::string_view kNoQuery = "Warning, library command successful but no query executed.";
constexpr std::string_view kPrecedence =
    "Warning, in the case of duplicate declaration names those declarations at the bottom of the list have "
    "precedence.";

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string diagnostics_text(std::string_view status, std::string_view source, const std::vector<Diagnostic>& ds) {
    std::string out(status);
    for (const auto& d : ds) out += "\n\n" + format_diagnostic(source, d);
    return out;
}

}  // namespace

std::string format_diagnostic(std::string_view src, const Diagnostic& d) {
    std::vector<std::pair<std::size_t, std::size_t>> lines;
    std::size_t b = 0;
    for (std::size_t i = 0; i < src.size(); ++i)
        if (src[i] == '\n') {
            lines.emplace_back(b, i);
            b = i + 1;
        }
    lines.emplace_back(b, src.size());
    std::size_t pos = std::min<std::size_t>(d.pos, src.size());
    std::size_t li = 0;
    while (li + 1 < lines.size() && lines[li].second < pos) ++li;
    auto [lb, le] = lines[li];
    std::size_t end = std::clamp<std::size_t>(d.end, pos, le);

    std::string out = "Error at character " + std::to_string(d.pos) + ",\n\n" + d.message + ":\n";
    if (li > 0) {
        auto prev = trim(src.substr(lines[li - 1].first, lines[li - 1].second - lines[li - 1].first));
        if (!prev.empty()) out += "  " + prev + "\n";
    }
    out += "  " + trim(src.substr(lb, end - lb)) + " <-------\n";
    std::string rest = trim(src.substr(end, le - end));
    if (rest.empty() && li + 1 < lines.size())
        rest = trim(src.substr(lines[li + 1].first, lines[li + 1].second - lines[li + 1].first));
    if (!rest.empty()) out += "\n  " + rest + "\n";
    return out;
}

std::optional<std::string> next_command(std::istream& in) {
    std::string cmd;
    char quote = 0;
    char c;
    while (in.get(c)) {
        cmd += c;
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '\'' || c == '"') {
            quote = c;
        } else if (c == ';') {
            return cmd;
        }
    }
    if (trim(cmd).empty()) return std::nullopt;
    return cmd;
}

Session::Session(Fetcher* fetcher, SessionOptions opts)
    : opts_(opts), wdb_(fetcher), bisim_(wdb_, facts_), library_(predefined_library()) {
    if (opts_.oracle) bisim_.set_oracle(opts_.oracle);
    if (opts_.use_approximations) bisim_.set_use_approximations(true);
    eval_ = std::make_unique<Evaluator>(wdb_, bisim_);
}

CommandOutcome Session::execute(std::string_view command) {
    auto t0 = std::chrono::steady_clock::now();
    CommandOutcome out;
    ParseResult user;
    try {
        user = parse(command);
    } catch (const ParseError& e) {
        out.kind = CommandOutcome::NotWellFormed;
        // The arrow goes after the whole offending word.
        std::uint32_t end = e.pos + 1;
        while (end < command.size() && (std::isalnum(static_cast<unsigned char>(command[end])) || command[end] == '_') &&
               std::isalnum(static_cast<unsigned char>(command[e.pos])))
            ++end;
        out.errors.push_back({e.pos, end, e.what()});
        bool lib = trim(command).rfind("library", 0) == 0;
        out.text = diagnostics_text(lib ? kLibraryNotWellFormed : kNotWellFormed, command, out.errors);
        return out;
    }
    const Node* first = user.tree->kid(0);
    if (first->is_word("exit")) {
        exited_ = true;
        out.kind = CommandOutcome::Exit;
        return out;
    }
    if (first->is_word("library"))
        out = run_library(command, *user.tree->kid(1));
    else
        out = run_query(command);
    out.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (out.kind == CommandOutcome::Query && opts_.print_time)
        out.text += "\n\nFinished in: " + std::to_string(static_cast<long long>(out.millis)) + " ms";
    return out;
}

CommandOutcome Session::run_query(std::string_view command) {
    CommandOutcome out;
    std::vector<std::string> texts;
    texts.reserve(library_.size());
    for (const auto& e : library_) texts.push_back(e.text);
    auto w = expand_library(command, texts);
    ParseResult pr = parse(w.source);
    auto a = analyze(pr);
    if (!a.ok()) {
        out.kind = CommandOutcome::NotWellTyped;
        const std::uint32_t body = w.body_begin + w.prefix_len;
        for (auto d : a.errors) {
            auto b = w.map_back(d.pos);
            auto e = w.map_back(d.end);
            if (d.pos < body && d.end > body) {
                // The node spans the inserted library: report it against the user's text only.
                constexpr std::string_view typed = "cannot be properly typed: ";
                std::string user = trim(command);
                if (!user.empty() && user.back() == ';') user.pop_back();
                if (d.message.rfind(typed, 0) == 0) d.message = std::string(typed) + trim(user);
                d.pos = 0;
                d.end = static_cast<std::uint32_t>(user.size());
            } else if (!b) {
                d.message = "in library declaration: " + d.message;
                d.pos = d.end = 0;
            } else {
                d.pos = *b;
                d.end = e ? *e : *b;
            }
            out.errors.push_back(d);
        }
        out.text = diagnostics_text(kNotWellTyped, command, out.errors);
        return out;
    }
    try {
        out.result = eval_->run(pr);
    } catch (const std::exception& e) {
        out.kind = CommandOutcome::Failed;
        out.errors.push_back({0, 0, e.what()});
        out.text = std::string(kQueryOk) + "\n\nQuery execution failed: " + e.what();
        return out;
    }
    out.kind = CommandOutcome::Query;
    out.text = std::string(kQueryOk) + "\n\n" + render_result(wdb_.sys(), out.result);
    return out;
}

CommandOutcome Session::run_library(std::string_view command, const Node& lc) {
    CommandOutcome out;
    out.kind = CommandOutcome::Library;
    if (lc.kid(0)->is_word("add")) {
        const Node* decls = lc.kid(1);
        std::string_view decl_text = command.substr(decls->begin, decls->end - decls->begin);
        std::string wrapped = "set query let ";
        for (const auto& e : library_) wrapped += e.text + ",\n";
        auto offset = static_cast<std::uint32_t>(wrapped.size());
        wrapped += std::string(decl_text) + " in {} endlet;";
        ParseResult pr = parse(wrapped);
        auto a = analyze(pr);
        if (!a.ok()) {
            out.kind = CommandOutcome::NotWellTyped;
            for (auto d : a.errors) {
                if (d.pos >= offset) {
                    d.pos = d.pos - offset + decls->begin;
                    d.end = d.end - offset + decls->begin;
                } else {
                    d.message = "in library declaration: " + d.message;
                    d.pos = d.end = 0;
                }
                out.errors.push_back(d);
            }
            out.text = diagnostics_text(kLibraryNotWellTyped, command, out.errors);
            return out;
        }
        for (auto& e : split_declarations(decl_text)) library_.push_back(std::move(e));
        out.text = std::string(kLibraryOk) + "\n\n" + std::string(kNoQuery);
        return out;
    }
    bool verbose = lc.size() == 2;
    out.text = std::string(kLibraryOk) + "\n\n" + std::string(kNoQuery) + "\n\n";
    if (!verbose) out.text += std::string(kPrecedence) + "\n\n";
    out.text += "List of library declaration(s):\n";
    for (std::size_t i = 0; i < library_.size(); ++i) {
        const bool last = i + 1 == library_.size();
        if (verbose) {
            std::string body;
            std::size_t start = 0;
            const auto& t = library_[i].text;
            while (start <= t.size()) {
                auto nl = t.find('\n', start);
                if (nl == std::string::npos) nl = t.size();
                body += "\n  " + t.substr(start, nl - start);
                start = nl + 1;
            }
            out.text += body + (last ? "" : ",") + "\n";
        } else {
            out.text += "\n  " + library_[i].summary + (last ? "" : ",");
        }
    }
    return out;
}

void Session::repl(std::istream& in, std::ostream& out, bool prompt) {
    while (!exited_) {
        if (prompt) out << "> " << std::flush;
        auto cmd = next_command(in);
        if (!cmd) break;
        auto r = execute(*cmd);
        if (!r.text.empty()) out << r.text << "\n\n";
    }
}

}  // namespace hwdb
