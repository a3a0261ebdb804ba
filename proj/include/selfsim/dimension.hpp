#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "selfsim/geometry.hpp"

namespace selfsim {

struct IFSystem;

// Unique s with sum_j w_j^s = target, found by bisection on the strictly
// decreasing residual. Throws when no positive root exists. If the root
// exceeds 2 it is returned as-is and *exceeds_planar_dim is set.
double moran_root(std::span<const double> weights, double target = 1.0,
                  bool* exceeds_planar_dim = nullptr);
double moran_root(const std::vector<double>& weights, double target = 1.0,
                  bool* exceeds_planar_dim = nullptr);

// Chaos-game sample of the attractor: start at the fixed point of map 0,
// apply uniformly random maps, discard the first 100 iterates.
std::vector<Vec2> sample_attractor(const IFSystem& sys, std::size_t n_points,
                                   std::uint64_t seed);

struct DimensionEstimate {
    double value = 0.0;
    double stderr_value = 0.0;
    double fit_r2 = 0.0;
    std::vector<std::pair<double, std::size_t>> scales;  // (box size, occupied count)
};

// Default box sizes 2^-3 .. 2^-12.
std::vector<double> default_box_scales();

// Least-squares slope of log(count) against log(1/size) over origin-anchored
// grid counts. Works for planar samples and for 1-D value lists.
DimensionEstimate box_dimension(std::span<const Vec2> points,
                                std::span<const double> scales);
DimensionEstimate box_dimension(std::span<const double> values,
                                std::span<const double> scales);

}  // namespace selfsim
