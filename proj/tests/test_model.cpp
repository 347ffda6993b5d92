#include <gtest/gtest.h>

#include "hwdb/bisim.hpp"
#include "hwdb/facts.hpp"
#include "support.hpp"

using namespace hwdb;
using namespace hwdb::test;

TEST(SetNames, FullAndSimpleForms) {
    auto a = parse_set_name("http://h/x/d.xml#b2", "http://h/other.xml");
    EXPECT_EQ(a.document_url, "http://h/x/d.xml");
    EXPECT_EQ(a.simple, "b2");
    auto b = parse_set_name("b2", "http://h/x/d.xml");
    EXPECT_EQ(b, a);
    EXPECT_EQ(a.full(), "http://h/x/d.xml#b2");
    EXPECT_THROW(parse_set_name("http://h/d.xml#", ""), Error);
    EXPECT_THROW(parse_set_name("a b", "http://h/d.xml"), Error);
}

TEST(SetNames, IdentifierCharset) {
    EXPECT_TRUE(is_identifier("refers-to"));
    EXPECT_TRUE(is_identifier("x_1"));
    EXPECT_FALSE(is_identifier(""));
    EXPECT_FALSE(is_identifier("a.b"));
    EXPECT_FALSE(is_identifier("a#b"));
}

TEST(SetNames, ApproximationUrlSitsNextToDocument) {
    EXPECT_EQ(approximation_url("http://h/t/BibDB-f1.xml"), "http://h/t/BibDB-f1.approximation.xml");
    EXPECT_EQ(approximation_url("http://h/t/doc"), "http://h/t/doc.approximation.xml");
}

TEST(Equations, InternIsStableAndDefinitionIsUnique) {
    EquationSystem sys;
    NameId x = sys.intern("u", "x");
    EXPECT_EQ(sys.intern(SetName{"u", "x"}), x);
    EXPECT_FALSE(sys.defined(x));
    sys.define(x, {});
    EXPECT_TRUE(sys.defined(x));
    EXPECT_THROW(sys.define(x, {}), Error);
    EXPECT_EQ(sys.defined_names(), std::vector<NameId>{x});
}

TEST(Equations, FreshNamesNeverCollide) {
    EquationSystem sys;
    NameId a = sys.fresh_name("res");
    NameId b = sys.fresh_name("res");
    EXPECT_NE(a, b);
    EXPECT_NE(sys.name(a).simple, sys.name(b).simple);
    EXPECT_EQ(sys.name(a).document_url, kSessionUrl);
}

TEST(Equations, FlattenReplacesNestedBracketsWithFreshNames) {
    // x = {a:{b:{}}, c:y}, y = {} flattens to x = {a:f, c:y}, f = {b:g}, g = {}.
    const std::string u = "http://t/d.xml";
    auto empty = NestedExpr::bracket({});
    auto nested = flatten({
        {SetName{u, "x"}, NestedExpr::bracket({{"a", NestedExpr::bracket({{"b", empty}})}, {"c", NestedExpr::name({u, "y"})}})},
        {SetName{u, "y"}, empty},
    });
    for (NameId i = 0; i < nested.name_count(); ++i) {
        EXPECT_TRUE(nested.defined(i)) << nested.full_name(i);
        EXPECT_EQ(nested.name(i).document_url, u);
    }
    SystemBuilder want("e");
    want.def("x", {{"a", "f"}, {"c", "y"}}).def("f", {{"b", "y"}}).def("y", {});
    EXPECT_TRUE(bisimilar(graph_of(nested), *nested.find({u, "x"}), graph_of(want.sys), want.id("x")));
}

TEST(Equations, MergeMapsIdsAndKeepsExistingEquations) {
    EquationSystem a, b;
    a.define(SetName{"u", "x"}, {{"l", SetName{"v", "y"}}});
    b.define(SetName{"v", "y"}, {});
    b.define(SetName{"u", "z"}, {});
    auto map = a.merge(b);
    EXPECT_TRUE(a.defined(*a.find({"v", "y"})));
    EXPECT_EQ(map[*b.find({"v", "y"})], *a.find({"v", "y"}));
    EXPECT_EQ(a.equation(*a.find({"u", "x"})).size(), 1u);
}

TEST(FactStore, YesFactsAreAnEquivalence) {
    FactStore f;
    EXPECT_EQ(f.status(3, 3), Truth::Yes);
    EXPECT_EQ(f.status(1, 2), Truth::Unknown);
    EXPECT_TRUE(f.set_yes(1, 2));
    EXPECT_TRUE(f.set_yes(2, 3));
    EXPECT_EQ(f.status(3, 1), Truth::Yes);
    EXPECT_FALSE(f.set_yes(1, 3));
    EXPECT_EQ(f.yes_merges(), 2u);
}

TEST(FactStore, NoFactsFollowClasses) {
    FactStore f;
    f.set_no(1, 4);
    f.set_yes(1, 2);
    f.set_yes(4, 5);
    EXPECT_EQ(f.status(2, 5), Truth::No);
    EXPECT_EQ(f.status(5, 2), Truth::No);
    EXPECT_EQ(f.peek(2, 5), Truth::No);
    EXPECT_THROW(f.set_yes(2, 4), InternalError);
    EXPECT_THROW(f.set_no(1, 2), InternalError);
}

TEST(FactStore, HookSeesEveryChange) {
    FactStore f;
    int calls = 0;
    f.on_fact = [&](NameId, NameId, bool) { ++calls; };
    f.set_yes(1, 2);
    f.set_yes(2, 1);
    f.set_no(1, 3);
    f.set_no(3, 2);
    EXPECT_EQ(calls, 2);
}

TEST(WdbCache, FetchesEachDocumentOnce) {
    auto fetcher = fixture_fetcher();
    Wdb wdb(&fetcher);
    NameId p1 = wdb.intern(parse_set_name(bib("BibDB-f2.xml#p1"), ""));
    NameId p2 = wdb.intern(parse_set_name(bib("BibDB-f2.xml#p2"), ""));
    wdb.lookup_equation(p1);
    wdb.lookup_equation(p2);
    EXPECT_EQ(wdb.fetch_count(), 1u);
    EXPECT_TRUE(wdb.document_loaded(bib("BibDB-f2.xml")));
    EXPECT_FALSE(wdb.document_loaded(bib("BibDB-f1.xml")));
}

TEST(WdbCache, LoadingMoreNeverRewritesEquations) {
    auto fetcher = fixture_fetcher();
    Wdb wdb(&fetcher);
    NameId b1 = wdb.intern(parse_set_name(bib("BibDB-f1.xml#b1"), ""));
    FlatExpr before = wdb.lookup_equation(b1);
    wdb.load_document(bib("BibDB-f2.xml"));
    EXPECT_EQ(wdb.lookup_equation(b1), before);
}

TEST(WdbCache, UndefinedNameInLoadedDocumentIsAnError) {
    auto fetcher = fixture_fetcher();
    Wdb wdb(&fetcher);
    NameId ghost = wdb.intern(parse_set_name(bib("BibDB-f1.xml#nothing"), ""));
    EXPECT_THROW(wdb.lookup_equation(ghost), Error);
}

TEST(WdbCache, NetworkDisabledIsExplicit) {
    DefaultFetcher::Options o;
    o.network = false;
    DefaultFetcher fetcher(o);
    try {
        fetcher.fetch("http://example.org/x.xml");
        FAIL() << "expected FetchError";
    } catch (const FetchError& e) {
        EXPECT_NE(std::string(e.what()).find("network disabled"), std::string::npos);
    }
}
