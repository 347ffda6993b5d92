#include <gtest/gtest.h>

#include "hwdb/forks.hpp"
#include "hwdb/library.hpp"
#include "hwdb/parser.hpp"
#include "queries.hpp"

using namespace hwdb;
using namespace hwdb::test;

namespace {

std::vector<std::string> all_queries() {
    return {kBibQuery, kUndeclaredQuery, kRestructuringQuery, kHorizontalTCQuery, kPathQuery, kLinearOrderQuery,
            decorate_query("decorate (g, \"a\")"), decorate_query("decorate (g, \"a\") = decorate (g, \"b\")", true),
            decorate_query("call Can(decorate (g, \"a\"))")};
}

}  // namespace

TEST(Tokenizer, TokenKinds) {
    auto t = tokenize("x http://a/b.xml#c \"X\" 'l' '*w' ; <=");
    ASSERT_EQ(t.size(), 8u);
    EXPECT_EQ(t[0].kind, Tok::Ident);
    EXPECT_EQ(t[1].kind, Tok::SetNameLit);
    EXPECT_EQ(t[2].kind, Tok::Atom);
    EXPECT_EQ(t[3].kind, Tok::QLabel);
    EXPECT_EQ(t[4].kind, Tok::QWild);
    EXPECT_EQ(t[5].text, ";");
    EXPECT_EQ(t[6].text, "<=");
    EXPECT_EQ(t[7].kind, Tok::End);
    EXPECT_EQ(t[1].begin, 2u);
    EXPECT_EQ(t[1].end, 18u);
}

TEST(Tokenizer, Errors) {
    EXPECT_THROW(tokenize("\"unterminated"), ParseError);
    EXPECT_THROW(tokenize("'a*b'"), ParseError);
    EXPECT_THROW(tokenize("x $ y"), ParseError);
    EXPECT_THROW(tokenize("http://a/b.xml#"), ParseError);
}

TEST(Parser, PublishedQueriesParse) {
    for (const auto& q : all_queries()) EXPECT_NO_THROW(parse(q)) << q;
}

TEST(Parser, PredefinedLibraryParses) {
    EXPECT_NO_THROW(parse_declarations(predefined_library_source()));
    EXPECT_EQ(predefined_library().size(), 18u);
}

TEST(Parser, ReprintReparsesToTheSameTree) {
    for (const auto& q : all_queries()) {
        auto pr = parse(q);
        auto again = parse(reprint(*pr.tree));
        EXPECT_EQ(dump_tree(*again.tree), dump_tree(*pr.tree)) << q;
    }
}

TEST(Parser, TreeShape) {
    auto pr = parse("set query let set constant b be {'a':\"X\"} in collect { l:x where l:x in b and l = 'a*' } endlet;");
    EXPECT_EQ(pr.tree->cat, Cat::TopLevelCommand);
    EXPECT_EQ(pr.tree->kid(0)->cat, Cat::Query);
    std::string d = dump_tree(*pr.tree);
    EXPECT_NE(d.find("<collect>(collect {"), std::string::npos);
    EXPECT_NE(d.find("<wildcard label>('a*')"), std::string::npos);
    EXPECT_NE(d.find("<variable pair>(<label variable>(l) : <set variable>(x))"), std::string::npos);
}

TEST(Parser, IdentifierNodeListInSourceOrder) {
    auto pr = parse("set query let set constant b be {} in collect { l:x where l:x in b } endlet;");
    std::vector<std::string> ids;
    for (auto* n : pr.identifier_nodes) ids.push_back(n->ident());
    EXPECT_EQ(ids, (std::vector<std::string>{"l", "x", "b"}));
    for (std::size_t i = 1; i < pr.identifier_nodes.size(); ++i)
        EXPECT_LT(pr.identifier_nodes[i - 1]->begin, pr.identifier_nodes[i]->begin);
    EXPECT_FALSE(pr.btflvn_sublists.empty());
}

TEST(Parser, ErrorAtFurthestPosition) {
    try {
        parse("set query collect { l:x where l:x in b ;");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.pos, 39u);
        EXPECT_NE(std::string(e.what()).find("expected '}'"), std::string::npos);
    }
    EXPECT_THROW(parse("set query {}"), ParseError);
    EXPECT_THROW(parse("set query let in {} endlet;"), ParseError);
    EXPECT_THROW(parse("select * from t;"), ParseError);
}

TEST(Parser, TopLevelCommands) {
    EXPECT_NO_THROW(parse("exit;"));
    EXPECT_NO_THROW(parse("library list;"));
    EXPECT_NO_THROW(parse("library list verbose;"));
    EXPECT_NO_THROW(parse("library add set constant c = {};"));
    EXPECT_NO_THROW(parse("boolean query true;"));
}

TEST(Forks, TableCoversEveryNonLeafCategory) {
    std::set<Cat> roots;
    for (const auto& f : fork_table()) roots.insert(f.root);
    for (int c = static_cast<int>(Cat::TopLevelCommand); c < static_cast<int>(Cat::Count_); ++c)
        EXPECT_TRUE(roots.count(static_cast<Cat>(c))) << cat_name(static_cast<Cat>(c));
}

TEST(Forks, EveryParsedNodeMatchesAFork) {
    std::function<void(const Node&)> walk = [&](const Node& n) {
        if (n.is_leaf()) return;
        auto roots = lookup_roots(n);
        EXPECT_NE(std::find(roots.begin(), roots.end(), n.cat), roots.end()) << dump_tree(n);
        for (const auto& k : n.kids) walk(*k);
    };
    for (const auto& q : all_queries()) walk(*parse(q).tree);
}

TEST(Forks, IdentifierForksAreAmbiguous) {
    std::vector<ForkSymbol> ident{ForkSymbol{false, Cat::Leaf, Tok::Ident, ""}};
    auto roots = lookup_roots(ident);
    EXPECT_GE(roots.size(), 4u);
    for (Cat c : roots) EXPECT_TRUE(is_identifier_cat(c)) << cat_name(c);
}
