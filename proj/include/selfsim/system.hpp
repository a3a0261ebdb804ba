#pragma once

#include <cstdint>
#include <vector>

#include "selfsim/similitude.hpp"

namespace selfsim {

// Word over the map alphabet, zero-based indices, left-to-right composition.
using Word = std::vector<std::uint32_t>;

// Generation ball psi_word(B0): diameter is the product of the ratios along
// the word (diam B0 = 1), center is psi_word(0).
struct Ball {
    Vec2 center;
    double diameter = 1.0;
    Word word;
};

inline constexpr std::size_t kDefaultBudget = 1'000'000;

// Ordered system of similitudes, all mapping B0 = B(0, 1/2) into itself.
// sim_dimension caches the Moran root of the ratios.
struct IFSystem {
    std::vector<Similitude> maps;
    double sim_dimension = 0.0;

    static IFSystem create(std::vector<Similitude> maps);
    int size() const { return static_cast<int>(maps.size()); }
};

// Sufficient containment test |w| + r/2 <= 1/2 with a small tolerance so
// maps normalized exactly onto the boundary are accepted.
bool maps_into_reference_ball(const Similitude& s);

struct NormalizationResult {
    IFSystem system;
    double lambda = 1.0;  // common factor applied to all translations
};

// Scale all translations by the largest lambda in (0,1] making every map
// send B0 into B0. Distance sets scale by lambda, dimensions do not change.
NormalizationResult normalize_into_ball(const std::vector<Similitude>& maps);

struct ZeroTranslationResult {
    IFSystem system;
    double lambda = 1.0;
    Vec2 shift;      // fixed point of map j that was moved to the origin
    int map_index = 0;
};

// Conjugate the system by the translation taking the fixed point of map j to
// the origin, then renormalize into B0. Map j ends up with translation (0,0).
ZeroTranslationResult normalize_zero_translation(const IFSystem& sys, int j);

// Left-to-right composition psi_{w1} o ... o psi_{wn}. Empty word returns the
// identity marker.
Similitude word_map(const IFSystem& sys, const Word& w);

// Exact type of a word (fraction arithmetic only, no floats).
IsometryType word_type(const IFSystem& sys, const Word& w);

// All q^n generation-n balls in lexicographic word order. n = 0 gives B0.
std::vector<Ball> generation_balls(const IFSystem& sys, int n,
                                   std::size_t budget = kDefaultBudget);

// System generated by the word maps of `words` (each interpreted in `sys`).
IFSystem subsystem_from_words(const IFSystem& sys, const std::vector<Word>& words);

}  // namespace selfsim
