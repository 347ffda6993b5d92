#include <gtest/gtest.h>

#include "hwdb/bisim.hpp"
#include "support.hpp"

using namespace hwdb;
using namespace hwdb::test;

namespace {

struct Outcome {
    bool boolean = false;
    bool truth = false;
    Graph graph;
};

Outcome evaluate(const EquationSystem& sys, const std::string& query) {
    MemoryFetcher f;
    serve(f, sys);
    SessionOptions o;
    o.print_time = false;
    Session s(&f, o);
    auto out = s.execute(query);
    EXPECT_EQ(out.kind, CommandOutcome::Query) << query << "\n" << out.text;
    Outcome r;
    r.boolean = out.result.boolean;
    r.truth = out.result.truth;
    if (out.kind == CommandOutcome::Query && !r.boolean) r.graph = reachable(s.wdb(), out.result.root);
    return r;
}

}  // namespace

// The lazy distributed algorithm, partition refinement and the test oracle agree on every pair.
TEST(Properties, BisimilarAgreesWithNaiveAndOracle) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> size(2, 25), labels(1, 4), docs(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
        auto sys = random_system(rng, size(rng), labels(rng), docs(rng));
        auto blocks = naive_bisimulation(sys);
        auto g = graph_of(sys);
        auto r = bisimulation(g, g);
        MemoryFetcher fetcher;
        serve(fetcher, sys);
        Wdb wdb(&fetcher);
        FactStore facts;
        Bisimulator bisim(wdb, facts);
        auto names = sys.defined_names();
        std::vector<NameId> order(names.begin(), names.end());
        std::shuffle(order.begin(), order.end(), rng);
        for (NameId a : order)
            for (NameId b : names) {
                bool oracle = r[a][b] != 0;
                ASSERT_EQ(blocks[a] == blocks[b], oracle) << trial;
                ASSERT_EQ(bisim.bisimilar(sys.name(a), sys.name(b)), oracle)
                    << trial << " " << sys.full_name(a) << " " << sys.full_name(b);
            }
    }
}

TEST(Properties, EvaluatorIsInvariantUnderRepresentation) {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> size(3, 10), docs(1, 3);
    for (int trial = 0; trial < 50; ++trial) {
        auto sys = random_system(rng, size(rng), 3, docs(rng));
        auto alt = disguise(sys, rng);
        ASSERT_TRUE(bisimilar(graph_of(sys), 0, graph_of(alt), static_cast<int>(*alt.find(sys.name(0)))));
        const std::string x = sys.full_name(0);
        const std::string y = sys.full_name(static_cast<NameId>(sys.defined_names().size() - 1));
        for (const std::string& q : {
                 "set query collect { l:z where l:z in " + x + " and exists m:w in z . m = 'a' };",
                 "set query separate { l:z in " + x + " where l = 'b' };",
                 "set query TC " + x + ";",
                 "set query (U " + x + ");",
                 "set query call Can(" + x + ");",
                 "boolean query exists l:z in " + x + " . z = " + y + ";",
                 "boolean query " + x + " = " + y + ";",
                 "boolean query forall l:z in " + x + " . 'a':" + y + " in z;",
             }) {
            auto a = evaluate(sys, q), b = evaluate(alt, q);
            ASSERT_EQ(a.boolean, b.boolean);
            if (a.boolean) {
                EXPECT_EQ(a.truth, b.truth) << trial << " " << q;
            } else if (!a.graph.out.empty() && !b.graph.out.empty()) {
                EXPECT_TRUE(bisimilar(a.graph, 0, b.graph, 0)) << trial << " " << q;
            }
        }
    }
}

// Writing every document and reading it back keeps the bisimulation class of every defined name.
TEST(Properties, XmlRoundTripPreservesBisimulation) {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> size(1, 25), labels(1, 4), docs(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
        auto sys = random_system(rng, size(rng), labels(rng), docs(rng));
        EquationSystem back;
        for (const auto& [url, text] : documents_of(sys)) {
            auto doc = read_xml_wdb(text, url);
            ASSERT_TRUE(validate(doc).empty()) << text;
            auto again = write_xml_wdb(from_equations(to_equations(doc), url));
            back.merge(load_xml_wdb(again, url));
        }
        auto r = bisimulation(graph_of(sys), graph_of(back));
        for (NameId i : sys.defined_names()) {
            auto j = back.find(sys.name(i));
            ASSERT_TRUE(j) << sys.full_name(i);
            EXPECT_TRUE(r[i][*j]) << trial << " " << sys.full_name(i);
        }
    }
}
