#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hwdb/analysis.hpp"
#include "hwdb/evaluator.hpp"
#include "hwdb/library.hpp"

namespace hwdb {

struct SessionOptions {
    OracleClient* oracle = nullptr;
    bool use_approximations = false;
    bool print_time = true;
};

// Outcome of one top-level command.
struct CommandOutcome {
    enum Kind { Query, NotWellFormed, NotWellTyped, Failed, Library, Exit } kind = Query;
    QueryResult result;
    std::vector<Diagnostic> errors;  // positions refer to the command text
    std::string text;                // what the session prints
    double millis = 0;
};

// A query session: the library (predefined declarations first), the WDB cache and the fact store.
class Session {
public:
    Session(Fetcher* fetcher, SessionOptions opts = {});

    CommandOutcome execute(std::string_view command);
    // Reads ';'-terminated commands until exit or end of input.
    void repl(std::istream& in, std::ostream& out, bool prompt = false);
    bool exited() const { return exited_; }

    const std::vector<LibraryEntry>& library() const { return library_; }
    Wdb& wdb() { return wdb_; }
    FactStore& facts() { return facts_; }
    Bisimulator& bisim() { return bisim_; }
    Evaluator& evaluator() { return *eval_; }

private:
    CommandOutcome run_query(std::string_view command);
    CommandOutcome run_library(std::string_view command, const Node& lc);

    SessionOptions opts_;
    Wdb wdb_;
    FactStore facts_;
    Bisimulator bisim_;
    std::unique_ptr<Evaluator> eval_;
    std::vector<LibraryEntry> library_;
    bool exited_ = false;
};

// "Error at character N," block with the surrounding source lines and an arrow after the offending token.
std::string format_diagnostic(std::string_view source, const Diagnostic& d);

// Splits input into ';'-terminated commands, ignoring ';' inside quotes.
std::optional<std::string> next_command(std::istream& in);

}  // namespace hwdb
