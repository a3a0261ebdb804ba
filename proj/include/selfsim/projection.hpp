#pragma once

#include <cstdint>
#include <vector>

#include "selfsim/system.hpp"

namespace selfsim {

// Orthogonal projection of a ball onto the line spanned by e: an interval of
// length d(B) for every direction.
Interval project_interval(const Ball& ball, Vec2 e);

// Flat pool of identity-type words of a rational system, enumerated in
// depth-first order up to max_length, with a node budget on the full tree
// walk. Words are bit-packed; q must fit the packing.
struct WordPool {
    std::vector<Vec2> centers;
    std::vector<double> diameters;
    std::vector<std::uint64_t> packed;
    std::vector<std::uint8_t> lengths;
    int bits_per_letter = 2;
    int max_length = 0;  // deepest fully enumerated level

    std::size_t size() const { return diameters.size(); }
    Word unpack(std::size_t i) const;
};

WordPool identity_word_pool(const IFSystem& sys, int max_length, std::size_t node_budget);

struct FamilyOptions {
    int max_length = 14;
    std::size_t node_budget = 8'000'000;
    double gap_fraction = 0.25;  // required gap relative to each interval's length
};

// The good family of the direction e: identity-type generation balls from
// mixed generations whose e-projections are disjoint intervals with gaps,
// and whose diameters satisfy sum d^{1-eps} > 1.
struct GoodFamily {
    Vec2 direction;
    std::vector<Word> words;        // in projected interval order
    std::vector<double> diameters;  // parallel to words
    double exponent = 0.0;          // Moran root of the diameters
    double weight_sum = 0.0;        // sum d^{1-eps}
    double separation = 0.0;        // c: min gap between projected intervals
    double stability = 0.0;         // delta = c/4
    double eps = 0.0;
    int max_word_length = 0;
};

// Optimal (weighted interval scheduling) selection of a disjoint projected
// subfamily maximizing sum d^{1-eps}; succeeds when the optimum exceeds 1.
// Throws "direction not certified" otherwise.
GoodFamily find_good_family(const IFSystem& sys, Vec2 e, double eps,
                            const FamilyOptions& opts = {});
GoodFamily find_good_family(const IFSystem& sys, const WordPool& pool, Vec2 e, double eps,
                            double gap_fraction = 0.25);

// Best achievable weight sum per direction, for ranking directions before
// committing to one (an empty success list is a legitimate outcome).
struct DirectionScore {
    double theta = 0.0;
    Vec2 direction;
    double weight_sum = 0.0;
    std::size_t kept = 0;
};

std::vector<DirectionScore> scan_direction_scores(const WordPool& pool, double eps,
                                                  int grid_count, double gap_fraction = 0.25);

// Evenly spaced directions on the half-circle; returns the successful
// families only.
std::vector<GoodFamily> scan_directions(const IFSystem& sys, double eps, int grid_count,
                                        const FamilyOptions& opts = {});

// Recompute the family's projected intervals at direction xi from its words.
std::vector<Interval> family_intervals_at(const IFSystem& sys, const GoodFamily& family,
                                          Vec2 xi);

// True iff the projections at xi are still pairwise disjoint.
bool family_disjoint_at(const IFSystem& sys, const GoodFamily& family, Vec2 xi);

}  // namespace selfsim
