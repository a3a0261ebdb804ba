#pragma once

#include <vector>

#include "selfsim/system.hpp"

namespace selfsim {

// Finite closure of the generator types under composition, with a shortest
// killing word per type: a word whose composed type is the inverse, so
// appending it to any word of that type yields the identity type.
struct TypeTable {
    std::vector<IsometryType> types;
    std::vector<Word> killing_words;  // parallel to types
    int max_killing_length = 0;       // the constant C

    int find(const IsometryType& t) const;
    const Word& killing_word_for(const IsometryType& t) const;
};

// Breadth-first closure over exact types; requires all angles rational.
TypeTable type_closure(const IFSystem& sys);

struct DerotationResult {
    std::vector<Word> words;              // accumulated identity-type words
    IFSystem system;                      // system generated by those words
    std::vector<double> bad_mass_trace;   // sum of r^t over bad words, per iteration
    std::vector<double> good_mass_trace;  // accumulated good mass, per iteration
    int iterations = 0;
};

// Iterative rewriting: bad (non-identity-type) words are extended on the
// right by all q^k words of the killing length of their type; classification
// repeats until the accumulated good words satisfy sum r^{1-eps} > 1.
// Appending (rather than the prepending in the source construction) keeps the
// word multiset prefix-free, so the output inherits very strong separation;
// the killing condition is two-sided in the type group so the termination
// argument is unchanged.
DerotationResult derotate(const IFSystem& sys, double eps, int max_iterations,
                          std::size_t budget = kDefaultBudget);

}  // namespace selfsim
