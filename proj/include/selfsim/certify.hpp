#pragma once

#include <cstdint>
#include <vector>

#include "selfsim/distance.hpp"
#include "selfsim/io.hpp"

namespace selfsim {

struct CertifyOptions {
    double eps = 0.1;
    std::uint64_t seed = 0;
    std::size_t budget = kDefaultBudget;

    int extract_max_generation = 12;
    int derotate_max_iterations = 30;
    int scan_grid = 96;
    int family_max_length = 14;
    std::size_t family_node_budget = 8'000'000;
    double gap_fraction = 0.25;
    int pin_point_depth = 10;
    std::size_t pin_point_cap = 60'000;
    std::size_t max_pairs = 2'000'000;
    int candidate_directions = 48;
    int cantor_depth = 4;
    std::size_t cantor_node_budget = 400'000;
    std::size_t cone_pair_budget = 200'000;
    int cone_samples = 20'000;
};

// End-to-end certification. Returns the self-contained certificate document;
// throws selfsim::Error naming the failed stage when no certificate can be
// produced within the budgets.
json certify(const std::vector<Similitude>& input_maps, const CertifyOptions& opts = {});

double certificate_bound(const json& certificate);

}  // namespace selfsim
