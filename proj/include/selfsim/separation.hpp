#pragma once

#include <vector>

#include "selfsim/system.hpp"

namespace selfsim {

// True iff all first-generation balls are pairwise disjoint as closed balls
// (strict center-distance test).
bool check_very_strong_separation(const IFSystem& sys);
bool balls_pairwise_disjoint(const std::vector<Ball>& balls);

// Greedy Vitali selection: sort by diameter descending (ties lexicographic in
// words), take each ball disjoint from everything taken so far. Every input
// ball then meets a selected ball of at least its diameter, so it lies inside
// the 5-enlargement of that ball.
std::vector<Ball> vitali_disjoint_subfamily(const std::vector<Ball>& balls);

// Checkable form of the 5B cover: every input center lies within
// (5/2) d(B_sel) of a selected ball with d(B_sel) >= d(B_in).
bool vitali_five_cover_holds(const std::vector<Ball>& all,
                             const std::vector<Ball>& selected);

struct SeparatedSubsystem {
    std::vector<Word> words;      // all of one generation
    double sub_dimension = 0.0;   // Moran root of the selected diameters
    int generation = 0;
};

// Lemma-style extraction: per generation n, Vitali-select a disjoint
// subfamily and return the first n whose Moran root exceeds target_dim.
SeparatedSubsystem extract_separated_subsystem(const IFSystem& sys, double target_dim,
                                               int max_generation,
                                               std::size_t budget = kDefaultBudget);

// Replace the selected word of smallest diameter by its extension with map j
// (which must carry an irrational angle); disjointness is preserved because
// the new ball nests inside the old one.
SeparatedSubsystem preserve_irrational(const IFSystem& sys, SeparatedSubsystem sub, int j);

}  // namespace selfsim
