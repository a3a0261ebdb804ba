#include "selfsim/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "selfsim/dimension.hpp"
#include "selfsim/error.hpp"

namespace selfsim {

std::vector<K0Point> enumerate_K0(const IFSystem& sys, int max_depth, std::size_t budget) {
    bool has_zero = false;
    for (const auto& m : sys.maps) has_zero = has_zero || norm(m.w) <= 1e-14;
    if (!has_zero)
        throw Error("enumerate_K0",
                    "no zero-translation map; run normalize_zero_translation first");
    for (const auto& m : sys.maps)
        if (!m.iso.angle.rational) throw Error("enumerate_K0", "rational types required");

    WordPool pool = identity_word_pool(sys, max_depth, budget);
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // shortest first, then enumeration (lexicographic) order
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pool.lengths[a] < pool.lengths[b];
    });
    std::vector<K0Point> out;
    std::vector<std::pair<std::int64_t, std::int64_t>> seen;
    seen.reserve(pool.size());
    auto quantize = [](Vec2 p) {
        return std::pair<std::int64_t, std::int64_t>{
            static_cast<std::int64_t>(std::llround(p.x * 1e12)),
            static_cast<std::int64_t>(std::llround(p.y * 1e12))};
    };
    std::vector<std::pair<std::int64_t, std::int64_t>> sorted_seen;
    for (std::size_t i : order) {
        auto key = quantize(pool.centers[i]);
        auto it = std::lower_bound(sorted_seen.begin(), sorted_seen.end(), key);
        if (it != sorted_seen.end() && *it == key) continue;
        sorted_seen.insert(it, key);
        out.push_back({pool.centers[i], pool.unpack(i)});
    }
    return out;
}

K0Witness nearest_k0_witness(const IFSystem& sys, const TypeTable& table, Vec2 target,
                             double radius, int max_depth) {
    Word word;
    Similitude acc = identity_marker();
    IsometryType type = IsometryType::identity();
    double diam = 1.0;
    int killing_len = table.max_killing_length;
    for (int depth = 0; depth < max_depth; ++depth) {
        if (diam * (1.0 + killing_len) < radius) break;  // appending stays inside the ball
        // descend into the child ball nearest to the target
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < sys.size(); ++j) {
            Similitude child = word.empty() ? sys.maps[static_cast<std::size_t>(j)]
                                            : compose(acc, sys.maps[static_cast<std::size_t>(j)]);
            double d = norm(child.w - target) - 0.5 * child.ratio;
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        acc = word.empty() ? sys.maps[static_cast<std::size_t>(best)]
                           : compose(acc, sys.maps[static_cast<std::size_t>(best)]);
        word.push_back(static_cast<std::uint32_t>(best));
        type = type_compose(type, sys.maps[static_cast<std::size_t>(best)].iso);
        diam = acc.ratio;
    }
    for (std::uint32_t j : type.is_identity() ? Word{} : table.killing_word_for(type)) {
        acc = compose(acc, sys.maps[j]);
        word.push_back(j);
    }
    K0Witness w;
    w.word = std::move(word);
    w.point = acc.w;
    w.distance = norm(acc.w - target);
    return w;
}

DirectionSet direction_set(const std::vector<Vec2>& points, std::size_t max_pairs,
                           std::uint64_t seed) {
    const std::size_t n = points.size();
    if (n < 2) throw Error("direction_set", "need at least two points");
    struct Entry {
        double angle;
        std::uint32_t i, j;
    };
    std::vector<Entry> entries;
    auto push = [&](std::size_t i, std::size_t j) {
        Vec2 d = points[i] - points[j];
        if (norm2(d) < 1e-24) return;
        double a = std::atan2(d.y, d.x);
        if (a < 0) a += std::numbers::pi;
        if (a >= std::numbers::pi) a -= std::numbers::pi;
        entries.push_back({a, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    };
    double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    if (total <= static_cast<double>(max_pairs)) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) push(i, j);
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t k = 0; k < max_pairs; ++k) {
            std::size_t i = rng() % n, j = rng() % n;
            if (i == j) continue;
            push(i, j);
        }
    }
    if (entries.empty()) throw Error("direction_set", "all points coincide");
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.angle < b.angle; });
    DirectionSet out;
    out.angles.reserve(entries.size());
    out.pairs.reserve(entries.size());
    for (const auto& e : entries) {
        out.angles.push_back(e.angle);
        out.pairs.emplace_back(e.i, e.j);
    }
    if (out.angles.size() == 1) {
        out.max_gap = std::numbers::pi;
    } else {
        double gap = out.angles.front() + std::numbers::pi - out.angles.back();
        for (std::size_t k = 1; k < out.angles.size(); ++k)
            gap = std::max(gap, out.angles[k] - out.angles[k - 1]);
        out.max_gap = gap;
    }
    return out;
}

bool cone_contains(const Cone& cone, Vec2 y) {
    Vec2 d = y - cone.apex;
    double along = dot(d, cone.axis);
    Vec2 residual = d - along * cone.axis;
    return norm(residual) <= cone.alpha * norm(d);
}

double cone_safe_radius(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("cone_safe_radius", "alpha must lie in (0,1)");
    return 0.5 + 2.0 / alpha;
}

namespace {

// coordinates of x in the (e, xi) frame with e = perp(xi) oriented toward x
struct Frame {
    Vec2 e, xi;
    double X, P;  // x = X e + P xi
};

Frame make_frame(Vec2 x, Vec2 xi) {
    Frame f;
    f.xi = normalized(xi);
    f.e = perp(f.xi);
    if (dot(x, f.e) < 0) f.e = -1.0 * f.e;
    f.X = dot(x, f.e);
    f.P = dot(x, f.xi);
    return f;
}

}  // namespace

bool verify_cone_condition(Vec2 x, Vec2 xi, double alpha, int samples, std::uint64_t seed) {
    if (norm(x) < 0.5) throw Error("verify_cone_condition", "apex must lie outside B0");
    Frame fr = make_frame(x, xi);
    std::mt19937_64 rng(seed);
    auto unif = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    int done = 0;
    int guard = 0;
    while (done < samples && guard < 100 * samples + 1000) {
        ++guard;
        // y uniform in B0
        double ya = unif(-0.5, 0.5), yb = unif(-0.5, 0.5);
        if (ya * ya + yb * yb > 0.25) continue;
        // y' on the circle S(x, |x-y|) cut with B0, via the stable chord form:
        // a(h) = X - sqrt(t^2 - (P - h)^2) computed without cancellation
        double hy = yb;  // xi-component of y
        double ay = ya;  // e-component of y
        double h = unif(-0.5, 0.5);
        // t^2 = (X - ay)^2 + (P - hy)^2; delta = t^2 - (P - h)^2
        // X^2 - t^2 = 2 X ay - ay^2 - (P - hy)^2, all O(X) terms, no cancellation
        double num0 = 2.0 * fr.X * ay - ay * ay - (fr.P - hy) * (fr.P - hy);
        double delta = (fr.X - ay) * (fr.X - ay) + (fr.P - hy) * (fr.P - hy) -
                       (fr.P - h) * (fr.P - h);
        if (delta < 0) continue;
        double root = std::sqrt(delta);
        double a = (num0 + (fr.P - h) * (fr.P - h)) / (fr.X + root);
        if (a * a + h * h > 0.25) continue;
        ++done;
        double de = ay - a;   // e-component of y - y'
        double dxi = hy - h;  // xi-component
        double dist_to_axis = std::abs(de);
        if (dist_to_axis > alpha * std::hypot(de, dxi) + 1e-15) return false;
    }
    return done > 0;
}

namespace {

// conservative analytic test: the alpha-cone with apex anywhere in B' misses B
bool cone_misses_ball(Vec2 c_b, double d_b, Vec2 c_bp, double d_bp, Vec2 e, double alpha) {
    Vec2 delta = c_b - c_bp;
    double pe = std::abs(dot(delta, e));
    double ad = norm(delta);
    return pe - 0.5 * d_bp > alpha * (ad + 0.5 * d_bp) + (1.0 + alpha) * 0.5 * d_b;
}

}  // namespace

bool verify_cone_separation(const IFSystem& g_sys, Vec2 xi, double alpha, int max_depth,
                            std::size_t pair_budget, std::uint64_t seed) {
    for (const auto& m : g_sys.maps)
        if (!m.iso.is_identity())
            throw Error("verify_cone_separation", "system must be rotation and reflection free");
    Vec2 e = perp(normalized(xi));
    const std::size_t p = g_sys.maps.size();
    if (p < 2) return true;

    // generation 1: exhaustive when affordable, else sorted-adjacent plus a
    // deterministic sample
    std::vector<std::size_t> by_proj(p);
    for (std::size_t i = 0; i < p; ++i) by_proj[i] = i;
    std::sort(by_proj.begin(), by_proj.end(), [&](std::size_t a, std::size_t b) {
        return dot(g_sys.maps[a].w, e) < dot(g_sys.maps[b].w, e);
    });
    auto pair_ok = [&](std::size_t i, std::size_t j) {
        const auto& a = g_sys.maps[i];
        const auto& b = g_sys.maps[j];
        return cone_misses_ball(a.w, a.ratio, b.w, b.ratio, e, alpha) &&
               cone_misses_ball(b.w, b.ratio, a.w, a.ratio, e, alpha);
    };
    std::mt19937_64 rng(seed);
    if (p * (p - 1) / 2 <= pair_budget) {
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j)
                if (!pair_ok(i, j)) return false;
    } else {
        for (std::size_t k = 1; k < p; ++k)
            if (!pair_ok(by_proj[k - 1], by_proj[k])) return false;
        for (std::size_t k = 0; k < pair_budget; ++k) {
            std::size_t i = rng() % p, j = rng() % p;
            if (i != j && !pair_ok(i, j)) return false;
        }
    }

    // deeper generations: sampled parent nodes; children are affine copies
    std::size_t node_samples =
        std::clamp<std::size_t>(pair_budget / std::max<std::size_t>(p, 1), 4, 64);
    for (int depth = 2; depth <= max_depth; ++depth) {
        for (std::size_t s = 0; s < node_samples; ++s) {
            // random parent word of length depth-1
            double scale = 1.0;
            Vec2 shift{0.0, 0.0};
            for (int k = 0; k < depth - 1; ++k) {
                const auto& m = g_sys.maps[rng() % p];
                shift = shift + scale * m.w;
                scale *= m.ratio;
            }
            // children pairs within this node (adjacent in projection + sample)
            auto child_ok = [&](std::size_t i, std::size_t j) {
                const auto& a = g_sys.maps[i];
                const auto& b = g_sys.maps[j];
                Vec2 ca = shift + scale * a.w, cb = shift + scale * b.w;
                return cone_misses_ball(ca, scale * a.ratio, cb, scale * b.ratio, e, alpha) &&
                       cone_misses_ball(cb, scale * b.ratio, ca, scale * a.ratio, e, alpha);
            };
            for (std::size_t k = 1; k < p; ++k)
                if (!child_ok(by_proj[k - 1], by_proj[k])) return false;
            for (std::size_t k = 0; k < std::min<std::size_t>(p, 512); ++k) {
                std::size_t i = rng() % p, j = rng() % p;
                if (i != j && !child_ok(i, j)) return false;
            }
        }
    }
    return true;
}

Interval distance_interval(Vec2 x, const Ball& ball) {
    double t = norm(x - ball.center);
    if (t <= 0.5 * ball.diameter)
        throw Error("distance_interval", "pin lies inside the ball");
    return {t - 0.5 * ball.diameter, t + 0.5 * ball.diameter};
}

IFSystem family_system(const IFSystem& base, const GoodFamily& family) {
    std::vector<Similitude> maps;
    maps.reserve(family.words.size());
    for (const auto& w : family.words) {
        Similitude m = word_map(base, w);
        if (!word_type(base, w).is_identity())
            throw Error("family_system", "family word does not have the identity type");
        maps.push_back(Similitude::create(m.ratio, IsometryType::identity(), m.w));
    }
    return IFSystem::create(std::move(maps));
}

CantorSystem build_cantor_system(const GoodFamily& family, const IFSystem& g_sys, Vec2 pin,
                                 int depth, std::size_t node_budget, std::uint64_t seed) {
    const std::size_t p = g_sys.maps.size();
    if (p < 2) throw Error("build_cantor_system", "family must contain at least two balls");
    if (depth < 1) throw Error("build_cantor_system", "depth must be >= 1");

    CantorSystem cs;
    cs.pin = pin;
    cs.pin_norm = norm(pin);
    cs.requested_depth = depth;
    cs.exponent = family.exponent;

    // condition (iv) is the same power sum at every node
    {
        double sum = 0.0;
        for (const auto& m : g_sys.maps) sum += std::pow(m.ratio, cs.exponent);
        cs.power_sum_error = std::abs(sum - 1.0);
        if (cs.power_sum_error > 1e-10)
            throw Error("build_cantor_system", "power sum deviates from 1 at the exponent");
    }

    double dmax = 0.0;
    for (const auto& m : g_sys.maps) dmax = std::max(dmax, m.ratio);
    cs.max_depth_length = std::pow(dmax, depth);

    // shifted interval of a ball (t_w + scale * child), relative to |pin|
    auto shifted_interval = [&](Vec2 center, double diam) {
        double mid = distance_difference(pin, center, Vec2{0.0, 0.0});
        return Interval{mid - 0.5 * diam, mid + 0.5 * diam};
    };

    // materialize levels while the node count allows; level 0 is d_pin(B0)
    cs.levels.push_back({Interval{-0.5, 0.5}});
    struct Node {
        Vec2 shift;
        double scale;
    };
    std::vector<Node> frontier{{Vec2{0.0, 0.0}, 1.0}};
    cs.node_count = 1;
    cs.min_sibling_gap = std::numeric_limits<double>::infinity();
    int level = 0;
    while (level < depth && frontier.size() * p <= node_budget) {
        std::vector<Node> next;
        next.reserve(frontier.size() * p);
        std::vector<Interval> intervals;
        intervals.reserve(frontier.size() * p);
        for (const auto& nd : frontier) {
            std::vector<Interval> sib;
            sib.reserve(p);
            for (const auto& m : g_sys.maps) {
                Vec2 c = nd.shift + nd.scale * m.w;
                double d = nd.scale * m.ratio;
                Interval iv = shifted_interval(c, d);
                sib.push_back(iv);
                next.push_back({c, d});
            }
            // (ii) siblings pairwise disjoint, via sort + adjacent gaps
            std::vector<Interval> sorted = sib;
            std::sort(sorted.begin(), sorted.end(),
                      [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
            for (std::size_t k = 1; k < sorted.size(); ++k) {
                double gap = sorted[k].lo - sorted[k - 1].hi;
                cs.min_sibling_gap = std::min(cs.min_sibling_gap, gap);
                if (gap <= 0.0)
                    throw Error("build_cantor_system",
                                "sibling intervals overlap at level " + std::to_string(level + 1));
            }
            // (i) nesting inside the parent interval
            Interval parent = shifted_interval(nd.shift, nd.scale);
            for (const auto& iv : sib)
                if (iv.lo < parent.lo - 1e-12 * std::max(1.0, cs.pin_norm) ||
                    iv.hi > parent.hi + 1e-12 * std::max(1.0, cs.pin_norm))
                    throw Error("build_cantor_system", "child interval escapes its parent");
            intervals.insert(intervals.end(), sib.begin(), sib.end());
        }
        cs.levels.push_back(std::move(intervals));
        frontier = std::move(next);
        cs.node_count += frontier.size();
        ++level;
    }
    cs.materialized_depth = level;

    // sampled nodes for the remaining depth
    std::mt19937_64 rng(seed);
    for (int d = level + 1; d <= depth; ++d) {
        std::size_t samples =
            std::clamp<std::size_t>(node_budget / std::max<std::size_t>(p, 1), 8, 128);
        for (std::size_t s = 0; s < samples; ++s) {
            Vec2 shift{0.0, 0.0};
            double scale = 1.0;
            for (int k = 0; k < d - 1; ++k) {
                const auto& m = g_sys.maps[rng() % p];
                shift = shift + scale * m.w;
                scale *= m.ratio;
            }
            std::vector<Interval> sib;
            sib.reserve(p);
            for (const auto& m : g_sys.maps)
                sib.push_back(shifted_interval(shift + scale * m.w, scale * m.ratio));
            std::sort(sib.begin(), sib.end(),
                      [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
            for (std::size_t k = 1; k < sib.size(); ++k) {
                double gap = sib[k].lo - sib[k - 1].hi;
                cs.min_sibling_gap = std::min(cs.min_sibling_gap, gap);
                if (gap <= 0.0)
                    throw Error("build_cantor_system",
                                "sibling intervals overlap at sampled level " + std::to_string(d));
            }
            ++cs.sampled_nodes;
        }
    }
    return cs;
}

std::vector<double> sample_pinned_distances(const IFSystem& sys, Vec2 x, std::size_t n_points,
                                            std::uint64_t seed) {
    std::vector<Vec2> pts = sample_attractor(sys, n_points, seed);
    std::vector<double> out;
    out.reserve(pts.size());
    for (const Vec2& p : pts) out.push_back(norm(x - p));
    return out;
}

}  // namespace selfsim
