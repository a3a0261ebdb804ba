#include "selfsim/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "selfsim/dimension.hpp"
#include "selfsim/error.hpp"
#include "selfsim/separation.hpp"

namespace selfsim {

namespace {

// descending alpha grid {0.5, 0.25, 0.1, 0.05, ...}
std::vector<double> alpha_grid() {
    std::vector<double> g;
    double decade = 1.0;
    while (decade > 1e-13) {
        g.push_back(0.5 * decade);
        g.push_back(0.25 * decade);
        g.push_back(0.1 * decade);
        decade *= 0.1;
    }
    return g;
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }
Vec2 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json words_json(const std::vector<Word>& words) {
    json arr = json::array();
    for (const auto& w : words) arr.push_back(word_to_json(w));
    return arr;
}

// identity-type word images of the anchor point p, deduplicated
struct PinPoints {
    std::vector<Vec2> points;
    std::vector<Word> words;
};

PinPoints pin_point_cloud(const IFSystem& sys, Vec2 p, int max_depth, std::size_t cap,
                          std::size_t node_budget) {
    WordPool pool = identity_word_pool(sys, max_depth, node_budget);
    PinPoints out;
    std::vector<std::pair<std::int64_t, std::int64_t>> seen;
    for (std::size_t i = 0; i < pool.size() && out.points.size() < cap; ++i) {
        Word w = pool.unpack(i);
        Similitude m = word_map(sys, w);
        Vec2 pt = apply(m, p);
        std::pair<std::int64_t, std::int64_t> key{
            static_cast<std::int64_t>(std::llround(pt.x * 1e12)),
            static_cast<std::int64_t>(std::llround(pt.y * 1e12))};
        auto it = std::lower_bound(seen.begin(), seen.end(), key);
        if (it != seen.end() && *it == key) continue;
        seen.insert(it, key);
        out.points.push_back(pt);
        out.words.push_back(std::move(w));
    }
    return out;
}

json irrational_branch(const std::vector<Similitude>& input, const IFSystem& sys,
                       double lambda, const CertifyOptions& opts, json cert) {
    cert["branch"] = "irrational";
    cert["proof_backed"] = false;
    cert["note"] =
        "an irrational rotation is present; the pinned distance set has full dimension by the "
        "C^1-image theorem for irrational-rotation systems, which this tool does not "
        "re-verify computationally";
    (void)input;

    // witness: a generation ball B not containing the chosen base point x_o,
    // so g(y) = |psi_B^{-1}(x_o) - y| has no singular point on the attractor
    std::vector<Vec2> pts = sample_attractor(sys, 4096, opts.seed);
    Vec2 x_o = pts.front();
    int n0 = 3;
    std::vector<Ball> balls = generation_balls(sys, n0, opts.budget);
    const Ball* far = nullptr;
    double best = -1.0;
    for (const auto& b : balls) {
        double d = norm(b.center - x_o) - 0.5 * b.diameter;
        if (d > best) {
            best = d;
            far = &b;
        }
    }
    cert["witness"] = {{"x_o", vec_json(x_o)},
                       {"ball_word", word_to_json(far->word)},
                       {"ball_generation", n0},
                       {"clearance", best},
                       {"contraction", far->diameter}};

    std::vector<double> dist = sample_pinned_distances(sys, x_o, 200'000, opts.seed + 1);
    auto scales = default_box_scales();
    DimensionEstimate est = box_dimension(dist, scales);
    cert["empirical"] = {{"pinned_box_dimension", est.value},
                         {"stderr", est.stderr_value},
                         {"fit_r2", est.fit_r2},
                         {"samples", dist.size()}};
    cert["bound"] = nullptr;
    cert["claimed_dimension"] = std::min(1.0, sys.sim_dimension);
    cert["normalization"] = {{"lambda", lambda}};
    cert["verified"] = {{"branch_dispatch", true}, {"witness_clearance", best > 0.0}};
    return cert;
}

}  // namespace

double certificate_bound(const json& certificate) {
    if (certificate.contains("bound") && certificate["bound"].is_number())
        return certificate["bound"].get<double>();
    return 0.0;
}

json certify(const std::vector<Similitude>& input_maps, const CertifyOptions& opts) {
    if (!(opts.eps > 0.0 && opts.eps <= 0.5))
        throw Error("certify", "eps must lie in (0, 1/2]");

    json cert;
    cert["version"] = "selfsim-certificate-1";
    cert["eps"] = opts.eps;
    cert["seed"] = opts.seed;
    cert["assumes_positive_length"] = true;  // user assertion H^1(K) > 0
    json input_doc = spec_to_json(input_maps);
    cert["input"] = input_doc;
    cert["input_sha256"] = sha256_hex(canonical_dump(input_doc));

    NormalizationResult norm_res = normalize_into_ball(input_maps);
    const IFSystem& sys = norm_res.system;
    cert["normalized"] = spec_to_json(sys.maps);
    cert["normalization"] = {{"lambda", norm_res.lambda}};
    cert["similarity_dimension"] = sys.sim_dimension;

    bool rational = true;
    for (const auto& m : sys.maps) rational = rational && m.iso.angle.rational;
    if (!rational) return irrational_branch(input_maps, sys, norm_res.lambda, opts, cert);
    cert["branch"] = "rational";
    cert["proof_backed"] = true;

    json verified = json::object();

    // subsystem chain: when the input already separates, run the staged
    // extraction and rewriting; otherwise the family search below supplies
    // the separated identity-type subsystem directly
    bool vss = check_very_strong_separation(sys);
    verified["very_strong_separation_input"] = vss;
    if (vss) {
        SeparatedSubsystem sep = extract_separated_subsystem(
            sys, 1.0 - opts.eps, opts.extract_max_generation, opts.budget);
        json sep_json = {{"generation", sep.generation},
                         {"sub_dimension", sep.sub_dimension},
                         {"word_count", sep.words.size()}};
        if (sep.words.size() <= 20'000) sep_json["words"] = words_json(sep.words);
        cert["separated_subsystem"] = std::move(sep_json);

        bool trivial = sep.generation == 1 &&
                       sep.words.size() == static_cast<std::size_t>(sys.size());
        if (trivial) {
            DerotationResult der =
                derotate(sys, opts.eps, opts.derotate_max_iterations, opts.budget);
            json der_json = {{"iterations", der.iterations},
                             {"bad_mass_trace", der.bad_mass_trace},
                             {"good_mass_trace", der.good_mass_trace},
                             {"word_count", der.words.size()},
                             {"root", der.system.sim_dimension}};
            if (der.words.size() <= 20'000) der_json["words"] = words_json(der.words);
            cert["derotation"] = std::move(der_json);
            verified["derotation_root_exceeds_target"] =
                der.system.sim_dimension > 1.0 - opts.eps;
        } else {
            cert["derotation"] = {{"skipped", "subsystem alphabet too large; the good family "
                                              "below is itself an identity-type subsystem"}};
        }
    } else {
        cert["separated_subsystem"] = {
            {"skipped", "input does not separate; the good family below is itself a separated "
                        "identity-type subsystem"}};
        cert["derotation"] = {{"skipped", "see separated_subsystem"}};
    }

    // pin anchor: first map (rational branch), its fixed point and type order
    const int j = 0;
    Vec2 p = fixed_point(sys.maps[static_cast<std::size_t>(j)]);
    int m_order = type_order(sys.maps[static_cast<std::size_t>(j)].iso);

    // direction atlas over the identity word pool
    WordPool pool = identity_word_pool(sys, opts.family_max_length, opts.family_node_budget);
    std::vector<DirectionScore> scores =
        scan_direction_scores(pool, opts.eps, opts.scan_grid, opts.gap_fraction);
    std::vector<DirectionScore> ranked = scores;
    std::sort(ranked.begin(), ranked.end(), [](const DirectionScore& a, const DirectionScore& b) {
        return a.weight_sum > b.weight_sum;
    });
    {
        json atlas = json::array();
        for (int k = 0; k < std::min<int>(8, static_cast<int>(ranked.size())); ++k)
            atlas.push_back({{"theta", ranked[static_cast<std::size_t>(k)].theta},
                             {"weight_sum", ranked[static_cast<std::size_t>(k)].weight_sum}});
        cert["scan"] = {{"grid", opts.scan_grid},
                        {"pool_words", pool.size()},
                        {"pool_depth", pool.max_length},
                        {"top_directions", std::move(atlas)}};
    }

    // base-point pairs: x_o = psi_u(p), y = psi_w(p) with [w] identity; the
    // pair direction is where the family is re-derived exactly
    PinPoints cloud = pin_point_cloud(sys, p, opts.pin_point_depth, opts.pin_point_cap,
                                      opts.family_node_budget);
    if (cloud.points.size() < 2) throw Error("certify", "pin point cloud degenerate");
    DirectionSet dirs = direction_set(cloud.points, opts.max_pairs, opts.seed);

    struct Candidate {
        double angular_distance;
        double separation;
        std::size_t pair_index;
        int rank;
    };
    std::vector<Candidate> candidates;
    int usable = std::min<int>(opts.candidate_directions, static_cast<int>(ranked.size()));
    for (int r = 0; r < usable; ++r) {
        double theta = ranked[static_cast<std::size_t>(r)].theta;
        auto it = std::lower_bound(dirs.angles.begin(), dirs.angles.end(), theta);
        for (int off = -2; off <= 2; ++off) {
            auto k = (it - dirs.angles.begin()) + off;
            if (k < 0 || k >= static_cast<std::ptrdiff_t>(dirs.angles.size())) continue;
            std::size_t idx = static_cast<std::size_t>(k);
            auto [i1, i2] = dirs.pairs[idx];
            double sep = norm(cloud.points[i1] - cloud.points[i2]);
            candidates.push_back({std::abs(dirs.angles[idx] - theta), sep, idx, r});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.rank != b.rank) return a.rank < b.rank;
        if (a.separation != b.separation) return a.separation > b.separation;
        return a.angular_distance < b.angular_distance;
    });

    GoodFamily family;
    bool found = false;
    Vec2 x_o, y_star;
    Word x_o_word, y_word;
    std::string last_failure = "no candidate directions";
    for (const auto& cand : candidates) {
        auto [i1, i2] = dirs.pairs[cand.pair_index];
        Vec2 a = cloud.points[i1], b = cloud.points[i2];
        Vec2 e = normalized(a - b);
        try {
            family = find_good_family(sys, pool, e, opts.eps, opts.gap_fraction);
        } catch (const Error& err) {
            last_failure = err.what();
            continue;
        }
        x_o = a;
        y_star = b;
        x_o_word = cloud.words[i1];
        y_word = cloud.words[i2];
        found = true;
        break;
    }
    if (!found)
        throw Error("certify",
                    "no pin pair direction admits a good family within budget "
                    "(distance set may contain an interval instead); last: " + last_failure);

    verified["family_weight_sum_exceeds_one"] = family.weight_sum > 1.0;
    verified["family_exponent_exceeds_target"] = family.exponent > 1.0 - opts.eps;
    cert["family"] = {{"direction", vec_json(family.direction)},
                      {"eps", family.eps},
                      {"exponent", family.exponent},
                      {"weight_sum", family.weight_sum},
                      {"separation_c", family.separation},
                      {"stability_delta", family.stability},
                      {"max_word_length", family.max_word_length},
                      {"size", family.words.size()},
                      {"words", words_json(family.words)},
                      {"diameters", family.diameters}};

    // stability is certified, not assumed: re-verify at perturbed directions
    {
        bool stable = true;
        for (int k = 0; k < 8; ++k) {
            double phi = 2.0 * std::numbers::pi * k / 8.0;
            double r = family.stability * (1.0 - 1e-6);
            Vec2 xi_dir = normalized(
                {family.direction.x + r * std::cos(phi), family.direction.y + r * std::sin(phi)});
            stable = stable && family_disjoint_at(sys, family, xi_dir);
        }
        verified["family_stability"] = stable;
        if (!stable) throw Error("certify", "family failed stability re-verification");
    }

    // cone opening: the largest grid alpha below c/2 that passes the explicit
    // generation-1..3 verification at xi perpendicular to the direction
    IFSystem g_sys = family_system(sys, family);
    Vec2 xi = perp(family.direction);
    double alpha = 0.0;
    for (double a : alpha_grid()) {
        if (a >= 0.5 * family.separation) continue;
        if (verify_cone_separation(g_sys, xi, a, 3, opts.cone_pair_budget, opts.seed)) {
            alpha = a;
            break;
        }
    }
    if (alpha == 0.0) throw Error("certify", "no cone opening verified for the family");
    double r_alpha = cone_safe_radius(alpha) + norm(p);
    verified["cone_separation_gen1_3"] = true;
    cert["cone"] = {{"xi", vec_json(xi)}, {"alpha", alpha}, {"r_alpha", r_alpha}};

    // pin construction: psi^n = psi_y o (psi_j^m)^n, which contracts toward
    // psi_y(p); x_n = (x_o - y*) / rho_n + p stays on the pair line offset by p
    double sigma = std::pow(sys.maps[static_cast<std::size_t>(j)].ratio, m_order);
    double r_y = word_map(sys, y_word).ratio;
    double base_distance = norm(x_o - y_star);
    int n_pin = 0;
    double rho = r_y;
    while (base_distance / rho < r_alpha && n_pin < 4096) {
        rho *= sigma;
        ++n_pin;
    }
    if (base_distance / rho < r_alpha) throw Error("certify", "pin iteration failed to escape");
    Vec2 x_n = (1.0 / rho) * (x_o - y_star) + p;
    cert["pin"] = {{"j", j},
                   {"m", m_order},
                   {"anchor_p", vec_json(p)},
                   {"n", n_pin},
                   {"rho_n", rho},
                   {"x_n", vec_json(x_n)},
                   {"x_o", vec_json(x_o)},
                   {"y", vec_json(y_star)},
                   {"x_o_word", word_to_json(x_o_word)},
                   {"y_word", word_to_json(y_word)},
                   {"base_distance", base_distance}};

    if (!verify_cone_condition(x_n, xi, alpha, opts.cone_samples, opts.seed))
        throw Error("certify", "cone condition failed at the pin; aborting rather than "
                               "shipping an unverified constant");
    verified["cone_condition_at_pin"] = true;

    // the inclusion identity rho_n |x_n - z| = |x_o - psi^n(z)| on samples
    {
        std::vector<Vec2> zs = sample_attractor(sys, 1000, opts.seed + 2);
        Similitude psi_n = word_map(sys, y_word);
        for (int k = 0; k < n_pin; ++k)
            for (int t = 0; t < m_order; ++t)
                psi_n = compose(psi_n, sys.maps[static_cast<std::size_t>(j)]);
        double worst = 0.0;
        for (const Vec2& z : zs) {
            double lhs = rho * norm(x_n - z);
            double rhs = norm(x_o - apply(psi_n, z));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        verified["inclusion_identity_1e9"] = worst < 1e-9;
        cert["inclusion_identity_error"] = worst;
        if (worst >= 1e-9)
            throw Error("certify", "inclusion identity drifted beyond 1e-9");
    }

    CantorSystem cantor = build_cantor_system(family, g_sys, x_n, opts.cantor_depth,
                                              opts.cantor_node_budget, opts.seed);
    verified["cantor_conditions"] = true;
    cert["cantor"] = {{"exponent", cantor.exponent},
                      {"requested_depth", cantor.requested_depth},
                      {"materialized_depth", cantor.materialized_depth},
                      {"node_count", cantor.node_count},
                      {"sampled_nodes", cantor.sampled_nodes},
                      {"min_sibling_gap", cantor.min_sibling_gap},
                      {"power_sum_error", cantor.power_sum_error}};

    cert["bound"] = family.exponent;
    verified["bound_exceeds_target"] = family.exponent > 1.0 - opts.eps;
    cert["verified"] = verified;
    return cert;
}

}  // namespace selfsim
