#include <gtest/gtest.h>

#include "hwdb/xml_wdb.hpp"
#include "support.hpp"

using namespace hwdb;
using namespace hwdb::test;

namespace {

const char* kHeader = "<?xml version=\"1.0\"?>\n<set:eqns xmlns:set=\"http://www.csc.liv.ac.uk/~molyneux/XML-WDB\">\n";

std::string doc(const std::string& body) { return std::string(kHeader) + body + "</set:eqns>\n"; }

std::vector<std::string> violations(const std::string& text) { return validate(read_xml_wdb(text, "http://t/d.xml")); }

// Both BibDB files as published, atoms encoded as {X:{}}.
SystemBuilder bibdb_expected() {
    SystemBuilder b("expected");
    b.atoms({"Jones", "Smith", "Databases"});
    b.def("BibDB", {{"book", "b1"}, {"book", "b2"}, {"paper", "p1"}, {"paper", "p2"}, {"paper", "p3"}});
    b.def("b1", {{"refers-to", "b2"}, {"refers-to", "p1"}});
    b.def("b2", {{"author", "atom-Jones"}, {"title", "atom-Databases"}});
    b.def("p1", {{"refers-to", "p2"}});
    b.def("p2", {{"author", "atom-Smith"}, {"title", "atom-Databases"}, {"refers-to", "p3"}});
    b.def("p3", {{"author", "atom-Jones"}, {"title", "atom-Databases"}});
    return b;
}

}  // namespace

TEST(XmlWdb, BibDBFilesAreValid) {
    for (auto f : {"BibDB-f1.xml", "BibDB-f2.xml", "family.xml", "family1.xml", "family2.xml"})
        EXPECT_TRUE(validate(read_xml_wdb(read_file(fixture(f)), "http://t/" + std::string(f))).empty()) << f;
}

TEST(XmlWdb, BibDBMeansThePublishedEquations) {
    auto fetcher = fixture_fetcher();
    Wdb wdb(&fetcher);
    auto want = bibdb_expected();
    auto wg = graph_of(want.sys);
    for (auto [file, id] : std::vector<std::pair<std::string, std::string>>{
             {"f1", "BibDB"}, {"f1", "b1"}, {"f1", "b2"}, {"f2", "p1"}, {"f2", "p2"}, {"f2", "p3"}}) {
        NameId n = wdb.intern(parse_set_name(bib("BibDB-" + file + ".xml#" + id), ""));
        auto g = reachable(wdb, n);
        EXPECT_TRUE(bisimilar(g, 0, wg, static_cast<int>(want.id(id)))) << id;
    }
}

TEST(XmlWdb, LocalRefsResolveAgainstTheDocumentUrl) {
    auto sys = load_xml_wdb(read_file(fixture("BibDB-f1.xml")), bib("BibDB-f1.xml"));
    NameId b1 = *sys.find(parse_set_name(bib("BibDB-f1.xml#b1"), ""));
    std::vector<std::string> members;
    for (const auto& el : sys.equation(b1)) members.push_back(sys.full_name(el.member));
    EXPECT_EQ(members, (std::vector<std::string>{bib("BibDB-f1.xml#b2"), bib("BibDB-f2.xml#p1")}));
}

TEST(XmlWdb, NestedElementsBecomeGeneratedNames) {
    auto sys = load_xml_wdb(read_file(fixture("family.xml")), "http://t/family.xml");
    SystemBuilder want("e");
    want.atoms({"Bob", "Alice", "Sam", "cat"});
    want.def("bob", {{"name", "atom-Bob"}, {"wife", "alice"}});
    want.def("alice", {{"name", "atom-Alice"}, {"husband", "bob"}, {"pet", "pet"}});
    want.def("pet", {{"name", "atom-Sam"}, {"species", "atom-cat"}});
    NameId alice = *sys.find({"http://t/family.xml", "alice"});
    EXPECT_TRUE(bisimilar(graph_of(sys), static_cast<int>(alice), graph_of(want.sys), static_cast<int>(want.id("alice"))));
    std::size_t generated = 0;
    for (NameId i : sys.defined_names()) generated += sys.generated(i);
    EXPECT_EQ(generated + 2, sys.defined_names().size());
}

TEST(XmlWdb, AttributesAndWhitespaceSeparatedText) {
    auto sys = load_xml_wdb(doc("<set:eqn set:id=\"x\"><book year=\"2009\">Big Data</book></set:eqn>\n"), "http://t/d.xml");
    SystemBuilder want("e");
    want.atoms({"2009"});
    want.def("book", {{"year", "atom-2009"}, {"Big", "empty"}, {"Data", "empty"}});
    want.def("x", {{"book", "book"}});
    EXPECT_TRUE(bisimilar(graph_of(sys), static_cast<int>(*sys.find({"http://t/d.xml", "x"})), graph_of(want.sys),
                          static_cast<int>(want.id("x"))));
}

TEST(XmlWdb, ReportsEveryViolation) {
    auto v = violations(doc(R"(<set:eqn set:id="a"><l set:ref="missing"/></set:eqn>
<set:eqn set:id="a"/>
<set:eqn><l/></set:eqn>
<set:eqn set:id="b"><l set:href="nohash"/><m set:id="c"/></set:eqn>
<other/>
)"));
    auto has = [&](const std::string& s) {
        return std::any_of(v.begin(), v.end(), [&](const std::string& e) { return e.find(s) != std::string::npos; });
    };
    EXPECT_TRUE(has("dangling set:ref 'missing'"));
    EXPECT_TRUE(has("duplicate id 'a'"));
    EXPECT_TRUE(has("without the required id"));
    EXPECT_TRUE(has("not a full set name"));
    EXPECT_TRUE(has("set:id may only appear on equation elements"));
    EXPECT_TRUE(has("root children must be eqn elements"));
    EXPECT_GE(v.size(), 6u);
}

TEST(XmlWdb, WrongRootIsRejected) {
    auto v = violations("<eqns/>");
    ASSERT_FALSE(v.empty());
    EXPECT_NE(v[0].find("root element must be eqns"), std::string::npos);
    EXPECT_THROW(load_xml_wdb("<eqns/>", "http://t/d.xml"), Error);
    EXPECT_THROW(load_xml_wdb("<set:eqns", "http://t/d.xml"), Error);
}

TEST(XmlWdb, RoundTripPreservesBisimulationOfBibDB) {
    for (auto f : {"BibDB-f1.xml", "BibDB-f2.xml", "family.xml"}) {
        const std::string url = bib(f);
        auto sys = load_xml_wdb(read_file(fixture(f)), url);
        auto back = load_xml_wdb(write_xml_wdb(from_equations(sys, url)), url);
        // Union graph of both systems; external references stay leaves in both.
        auto g = graph_of(sys), h = graph_of(back);
        auto r = bisimulation(g, h);
        for (NameId i : sys.defined_names()) {
            if (sys.generated(i)) continue;
            auto j = back.find(sys.name(i));
            ASSERT_TRUE(j) << sys.full_name(i);
            EXPECT_TRUE(r[i][*j]) << f << " " << sys.full_name(i);
        }
    }
}

TEST(XmlWdb, WriterUsesRefForLocalAndHrefForRemote) {
    auto sys = load_xml_wdb(read_file(fixture("BibDB-f1.xml")), bib("BibDB-f1.xml"));
    std::string text = write_xml_wdb(from_equations(sys, bib("BibDB-f1.xml")));
    EXPECT_NE(text.find("set:ref=\"b2\""), std::string::npos);
    EXPECT_NE(text.find("set:href=\"" + bib("BibDB-f2.xml#p1") + "\""), std::string::npos);
    EXPECT_TRUE(validate(read_xml_wdb(text, bib("BibDB-f1.xml"))).empty());
}
