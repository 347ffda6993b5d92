#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hwdb {

// Syntactic categories of the query language; Leaf marks terminals.
enum class Cat : std::uint8_t {
    Leaf,
    TopLevelCommand,
    LibraryCommand,
    Query,
    Declarations,
    SetConstantDecl,
    LabelConstantDecl,
    SetQueryDecl,
    BooleanQueryDecl,
    Variables,
    Variable,
    SetQueryName,
    BooleanQueryName,
    SetVariable,
    SetConstant,
    LabelVariable,
    LabelConstant,
    DeltaTerm,
    SetName,
    AtomicValue,
    Enumerate,
    Union,
    MultipleUnion,
    Collect,
    Separate,
    TransitiveClosure,
    Recursion,
    Decoration,
    IfElseTerm,
    SetQueryCall,
    TermWithDecls,
    DeltaFormula,
    SetEquality,
    LabelEquality,
    WildcardLabel,
    LabelRelationship,
    Membership,
    BooleanQueryCall,
    IfElseFormula,
    FormulaWithDecls,
    Conjunction,
    Disjunction,
    QuasiImplication,
    QuantifiedFormula,
    Forall,
    Exists,
    NegatedFormula,
    Label,
    LabelValue,
    LabelledTerms,
    LabelledTerm,
    VariablePair,
    Count_
};

std::string_view cat_name(Cat c);

// Identifier categories: their only fork is a bare identifier.
bool is_identifier_cat(Cat c);

enum class Tok : std::uint8_t {
    Ident,       // identifier that is not a keyword
    SetNameLit,  // url#simple
    Atom,        // "X"
    QLabel,      // 'x'
    QWild,       // '*x', 'x*', '*x*'
    Word,        // keyword or punctuation, compared by text
    End,
};

struct Token {
    Tok kind;
    std::string text;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
};

struct Node {
    Cat cat = Cat::Leaf;
    Tok tok = Tok::Word;
    std::string text;  // leaves: token text
    std::vector<std::unique_ptr<Node>> kids;
    Node* parent = nullptr;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;

    bool seen = false;
    bool correct = false;
    bool idn = false;         // identifier declaration node
    Node* decl = nullptr;     // identifier node -> its declaration node
    std::int32_t slot = -1;   // declaration nodes: evaluation slot

    bool is_leaf() const { return cat == Cat::Leaf; }
    bool is_word(std::string_view w) const { return cat == Cat::Leaf && tok == Tok::Word && text == w; }
    Node* kid(std::size_t i) const { return kids[i].get(); }
    std::size_t size() const { return kids.size(); }
    // Identifier text of an identifier node.
    const std::string& ident() const { return kids[0]->text; }
};

using NodePtr = std::unique_ptr<Node>;

// Concatenated leaf texts separated by single spaces; reparses to an isomorphic tree.
std::string reprint(const Node& n);

// "<cat>(kids...)" rendering for debugging and tests.
std::string dump_tree(const Node& n);

}  // namespace hwdb
