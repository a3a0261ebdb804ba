#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "selfsim/derotation.hpp"
#include "selfsim/projection.hpp"
#include "selfsim/system.hpp"

namespace selfsim {

struct K0Point {
    Vec2 point;
    Word word;  // identity composed type
};

// All identity-type words up to max_depth with their points psi_w(0),
// deduplicated by point (first word in shortest/lexicographic order wins).
// Requires rational types and a zero-translation map (run
// normalize_zero_translation first).
std::vector<K0Point> enumerate_K0(const IFSystem& sys, int max_depth,
                                  std::size_t budget = kDefaultBudget);

// Constructive density witness: an identity-type word whose point lies within
// `radius` of `target`, found by descending the ball tree and appending the
// killing word of the accumulated type.
struct K0Witness {
    Word word;
    Vec2 point;
    double distance = 0.0;
};
K0Witness nearest_k0_witness(const IFSystem& sys, const TypeTable& table, Vec2 target,
                             double radius, int max_depth = 64);

struct DirectionSet {
    std::vector<double> angles;  // sorted, folded to [0, pi)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // parallel to angles
    double max_gap = 0.0;        // largest angular gap, wraparound included
};

// Directions of (sub-sampled) point pairs, folded to the half-circle.
DirectionSet direction_set(const std::vector<Vec2>& points, std::size_t max_pairs,
                           std::uint64_t seed = 0);

// Double cone around the line through x in direction `axis`:
// y in C(x, L, alpha)  iff  dist(y - x, L) <= alpha |x - y|.
struct Cone {
    Vec2 apex;
    Vec2 axis;  // unit
    double alpha = 0.5;
};
bool cone_contains(const Cone& cone, Vec2 y);

// Conservative pin radius: circles around any x with |x| >= r_alpha cut B0
// along chords within the alpha-cone of the orthogonal direction; the
// constant is always re-verified by sampling, never trusted.
double cone_safe_radius(double alpha);

// Sampling check of the chord condition: pairs y, y' in B0 on common circles
// around x must satisfy dist(y - y', L_xi) <= alpha |y - y'|.
bool verify_cone_condition(Vec2 x, Vec2 xi, double alpha, int samples, std::uint64_t seed);

// Ball-versus-cone emptiness for distinct generation balls of the rotation
// free system: exhaustive at generation 1 when the pair budget allows, plus
// adjacent and sampled pairs, recursing to sampled nodes at depths 2..n.
bool verify_cone_separation(const IFSystem& g_sys, Vec2 xi, double alpha, int max_depth,
                            std::size_t pair_budget = 200'000, std::uint64_t seed = 0);

// Pinned interval d_x(B) = [|x - c| - d/2, |x - c| + d/2]; x must lie outside
// the ball.
Interval distance_interval(Vec2 x, const Ball& ball);

// Nested interval system of Martin-Mattila type for the pinned distances of
// the family attractor. Intervals are stored shifted by |pin| so that deep
// levels keep full precision. Levels are materialized while the node count
// allows; deeper levels up to `depth` are validated on sampled nodes with the
// scale-free recursion.
struct CantorSystem {
    double exponent = 0.0;
    Vec2 pin;
    double pin_norm = 0.0;
    int requested_depth = 0;
    int materialized_depth = 0;
    std::size_t node_count = 0;
    std::size_t sampled_nodes = 0;
    double min_sibling_gap = 0.0;       // over all checked nodes, in absolute units
    double power_sum_error = 0.0;       // |sum_i d_i^s - 1|
    double max_depth_length = 0.0;      // longest interval at requested depth
    std::vector<std::vector<Interval>> levels;  // shifted by pin_norm
};

// Pure scale-plus-translate system of the family balls (coincides with the
// family's word maps, whose types are the identity).
IFSystem family_system(const IFSystem& base, const GoodFamily& family);

CantorSystem build_cantor_system(const GoodFamily& family, const IFSystem& g_sys, Vec2 pin,
                                 int depth, std::size_t node_budget = 400'000,
                                 std::uint64_t seed = 0);

// |x - y| over attractor samples; deterministic given the seed.
std::vector<double> sample_pinned_distances(const IFSystem& sys, Vec2 x, std::size_t n_points,
                                            std::uint64_t seed);

}  // namespace selfsim
