#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "hwdb/approx.hpp"
#include "hwdb/engine.hpp"
#include "hwdb/experiment.hpp"
#include "hwdb/fetch.hpp"
#include "hwdb/oracle_net.hpp"
#include "hwdb/session.hpp"
#include "hwdb/xml_wdb.hpp"

using namespace hwdb;

namespace {

struct FetchFlags {
    bool no_network = false;
    std::vector<std::string> rewrites;  // PREFIX=REPLACEMENT

    DefaultFetcher make() const {
        DefaultFetcher::Options o;
        o.network = !no_network;
        for (const auto& r : rewrites) {
            auto eq = r.find('=');
            if (eq == std::string::npos || eq == 0) throw Error("--map expects PREFIX=REPLACEMENT, got \"" + r + "\"");
            o.rewrites.emplace_back(r.substr(0, eq), r.substr(eq + 1));
        }
        return DefaultFetcher(std::move(o));
    }

    void add_to(CLI::App& app) {
        app.add_flag("--no-network", no_network, "Only file URLs and plain paths; http(s) fetches fail");
        app.add_option("--map", rewrites, "Rewrite a URL prefix before fetching, e.g. http://host/dir/=./fixtures/");
    }
};

std::string url_for_path(const std::string& path) {
    if (path.find("://") != std::string::npos) return path;
    return std::filesystem::absolute(path).lexically_normal().string();
}

int run_session(const FetchFlags& ff, const std::string& oracle_endpoint, bool use_approx, const std::string& script,
                bool time) {
    DefaultFetcher fetcher = ff.make();
    std::unique_ptr<TcpOracleClient> oracle;
    if (!oracle_endpoint.empty()) oracle = std::make_unique<TcpOracleClient>(oracle_endpoint);
    SessionOptions opts;
    opts.oracle = oracle.get();
    opts.use_approximations = use_approx;
    opts.print_time = time;
    Session session(&fetcher, opts);
    if (!script.empty()) {
        std::ifstream in(script);
        if (!in) {
            std::cerr << "hwdb: cannot open script " << script << "\n";
            return 1;
        }
        session.repl(in, std::cout);
    } else {
        session.repl(std::cin, std::cout, true);
    }
    return 0;
}

int run_validate(const std::vector<std::string>& files) {
    int bad = 0;
    for (const auto& path : files) {
        try {
            auto doc = read_xml_wdb(read_file(path), url_for_path(path));
            auto errors = validate(doc);
            if (errors.empty()) {
                auto sys = to_equations(doc);
                std::cout << path << ": ok, " << sys.defined_names().size() << " equations\n";
                continue;
            }
            ++bad;
            for (const auto& e : errors) std::cout << path << ": " << e << "\n";
        } catch (const Error& e) {
            ++bad;
            std::cout << path << ": " << e.what() << "\n";
        }
    }
    return bad ? 1 : 0;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

int run_approx(const std::string& file, std::string url, const std::string& out) {
    if (url.empty()) url = url_for_path(file);
    auto sys = load_xml_wdb(read_file(file), url);
    auto frag = make_fragment(sys, url);
    auto facts = simple_approx(frag);
    write_output(out, write_approx_file(frag, facts));
    if (!out.empty() && out != "-") {
        std::size_t yes = 0;
        for (const auto& f : facts) yes += f.yes;
        std::cerr << out << ": " << facts.size() - yes << " negative, " << yes << " positive facts\n";
    }
    return 0;
}

int run_oracle_file(const FetchFlags& ff, const std::vector<std::string>& roots, std::uint64_t delay,
                    const std::string& out) {
    DefaultFetcher fetcher = ff.make();
    std::vector<std::string> urls;
    for (const auto& r : roots) urls.push_back(url_for_path(r));
    Wdb wdb(&fetcher);
    for (const auto& u : urls) wdb.load_document(u);
    for (bool more = true; more;) {
        more = false;
        auto& sys = wdb.sys();
        for (NameId i = 0; i < sys.name_count(); ++i) {
            const auto& url = sys.name(i).document_url;
            if (sys.defined(i) || url == kSessionUrl || wdb.document_loaded(url)) continue;
            wdb.load_document(url);
            more = true;
        }
    }
    write_output(out, write_oracle_file(oracle_facts(wdb.sys(), delay)));
    return 0;
}

volatile std::sig_atomic_t g_stop = 0;

int run_serve(const FetchFlags& ff, const std::string& host, std::uint16_t port, const std::string& trivial,
              const std::vector<std::string>& roots, bool use_approx) {
    std::signal(SIGINT, [](int) { g_stop = 1; });
    std::signal(SIGTERM, [](int) { g_stop = 1; });

    DefaultFetcher fetcher = ff.make();
    std::optional<TrivialOracle> file_oracle;
    std::optional<EngineCore> core;
    std::optional<BackgroundEngine> background;
    AnswerFn fn;
    if (!trivial.empty()) {
        file_oracle.emplace(read_oracle_file(read_file(trivial)));
        fn = [&](const std::string& x, const std::string& y) { return file_oracle->answer(x, y); };
    } else {
        if (roots.empty()) throw Error("serve needs --trivial FILE or at least one --root document");
        std::vector<std::string> urls;
        for (const auto& r : roots) urls.push_back(url_for_path(r));
        core.emplace(&fetcher, urls, use_approx);
        fn = [&](const std::string& x, const std::string& y) { return core->answer(x, y); };
    }
    OracleServer server(fn, host, port);
    std::cout << "listening on " << host << ":" << server.port() << std::endl;
    server.start();
    if (core) background.emplace(*core);
    bool reported = false;
    while (!g_stop) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
        if (core && !reported && core->done()) {
            auto s = core->stats();
            std::cout << "engine done: " << s.document_fetches << " documents, " << s.resolutions << " resolutions, "
                      << s.published_facts << " facts" << std::endl;
            reported = true;
        }
        if (background && !background->error().empty() && !reported) {
            std::cerr << "engine stopped: " << background->error() << std::endl;
            reported = true;
        }
    }
    if (background) background->stop();
    server.stop();
    return 0;
}

int run_experiment_cmd(const std::string& scenario, const std::vector<std::string>& strategies,
                       const std::vector<double>& delays, int n, const CostModel& costs) {
    Scenario sc = scenario == "chains" ? Scenario::Chains
                  : scenario == "self_contained" ? Scenario::SelfContained
                                                 : Scenario::ThreeFile;
    auto docs = build_scenario(sc, n);
    std::cout << "scenario,n,strategy,delay_ms,t_ms,bisimilar,fetches,evaluations,asks\n";
    for (const auto& st : strategies) {
        Strategy s = st == "no_engine" ? Strategy::NoEngine : st == "engine" ? Strategy::Engine : Strategy::EngineWithApprox;
        for (double d : delays) {
            auto r = run_experiment(docs, s, d, costs);
            std::cout << scenario << "," << n << "," << st << "," << d << "," << r.millis << ","
                      << (r.bisimilar ? "yes" : "no") << "," << r.client_fetches << "," << r.client_evaluations << ","
                      << r.asks << "\n";
            if (s == Strategy::NoEngine) break;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperset query system over web-like databases"};
    app.require_subcommand(0, 1);

    FetchFlags ff;
    ff.add_to(app);
    std::string oracle, script;
    bool use_approx = false, time = true;
    app.add_option("--oracle", oracle, "Bisimulation engine endpoint host:port");
    app.add_flag("--use-approximations", use_approx, "Load <doc>.approximation.xml next to every fetched document");
    app.add_option("--script", script, "Run ;-terminated commands from a file instead of stdin");
    app.add_flag("--time,!--no-time", time, "Print execution time after each query");

    auto* val = app.add_subcommand("validate", "Check XML-WDB documents");
    std::vector<std::string> val_files;
    val->add_option("files", val_files)->required()->check(CLI::ExistingFile);

    auto* apx = app.add_subcommand("approx", "Write the simple approximation file of one document");
    std::string apx_file, apx_url, apx_out;
    apx->add_option("file", apx_file)->required()->check(CLI::ExistingFile);
    apx->add_option("--url", apx_url, "Document URL used for full set names (default: absolute path)");
    apx->add_option("-o,--output", apx_out, "Output file (default: stdout)");

    auto* orf = app.add_subcommand("oracle-file", "Write a trivial-oracle file for every pair of reachable names");
    std::vector<std::string> orf_roots;
    std::uint64_t orf_delay = 0;
    std::string orf_out;
    orf->add_option("roots", orf_roots)->required();
    orf->add_option("--delay", orf_delay, "Delay in ms attached to every fact");
    orf->add_option("-o,--output", orf_out, "Output file (default: stdout)");

    auto* srv = app.add_subcommand("serve", "Run a bisimulation engine or trivial oracle over TCP");
    std::string srv_host = "127.0.0.1", srv_trivial;
    std::uint16_t srv_port = 7391;
    std::vector<std::string> srv_roots;
    srv->add_option("--host", srv_host);
    srv->add_option("--port", srv_port, "0 picks a free port");
    srv->add_option("--trivial", srv_trivial, "Answer from a trivial-oracle file")->check(CLI::ExistingFile);
    srv->add_option("--root", srv_roots, "Root document of the WDB served by the background engine");

    auto* exp = app.add_subcommand("experiment", "Simulated engine experiment on a generated WDB and its copy");
    std::string exp_scenario = "chains";
    std::vector<std::string> exp_strategies{"no_engine", "engine", "engine_with_approx"};
    std::vector<double> exp_delays{0};
    int exp_n = 10;
    CostModel costs;
    exp->add_option("--scenario", exp_scenario)->check(CLI::IsMember({"chains", "self_contained", "three_file"}));
    exp->add_option("--strategy", exp_strategies)->check(CLI::IsMember({"no_engine", "engine", "engine_with_approx"}));
    exp->add_option("--delay", exp_delays, "Engine head start in virtual ms");
    exp->add_option("--n", exp_n, "Cycle length for self_contained")->check(CLI::PositiveNumber);
    exp->add_option("--fetch-ms", costs.fetch_ms, "Simulated fetch latency");
    exp->add_option("--evaluation-ms", costs.evaluation_ms, "Cost of one rule evaluation");
    exp->add_option("--round-trip-ms", costs.round_trip_ms, "Cost of one oracle question");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*val) return run_validate(val_files);
        if (*apx) return run_approx(apx_file, apx_url, apx_out);
        if (*orf) return run_oracle_file(ff, orf_roots, orf_delay, orf_out);
        if (*srv) return run_serve(ff, srv_host, srv_port, srv_trivial, srv_roots, use_approx);
        if (*exp) return run_experiment_cmd(exp_scenario, exp_strategies, exp_delays, exp_n, costs);
        return run_session(ff, oracle, use_approx, script, time);
    } catch (const std::exception& e) {
        std::cerr << "hwdb: " << e.what() << "\n";
        return 1;
    }
}
