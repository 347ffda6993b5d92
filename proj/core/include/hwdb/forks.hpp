#pragma once

#include <string>
#include <vector>

#include "hwdb/parse_tree.hpp"

namespace hwdb {

// One symbol of a fork's child sequence: a category or a terminal (token kind, or keyword text).
struct ForkSymbol {
    bool is_cat = false;
    Cat cat = Cat::Leaf;
    Tok tok = Tok::Word;
    std::string word;

    static ForkSymbol of(const Node& n);
    bool operator==(const ForkSymbol& o) const {
        return is_cat == o.is_cat && cat == o.cat && tok == o.tok && word == o.word;
    }
    bool operator<(const ForkSymbol& o) const;
    std::string text() const;
};

// Regular right-hand side of a production.
struct Pattern {
    enum Kind { Sym, Seq, Alt, Opt, Star, Plus } kind = Sym;
    ForkSymbol sym;
    std::vector<Pattern> kids;
};

struct Fork {
    Cat root;
    Pattern pattern;
    bool identifier_fork = false;
};

const std::vector<Fork>& fork_table();

// Roots whose production derives exactly this child sequence in one step.
std::vector<Cat> lookup_roots(const std::vector<ForkSymbol>& children);
std::vector<Cat> lookup_roots(const Node& n);

// All child sequences of a fork with repetitions bounded by max_repeat.
std::vector<std::vector<ForkSymbol>> expand_fork(const Fork& f, int max_repeat);

}  // namespace hwdb
