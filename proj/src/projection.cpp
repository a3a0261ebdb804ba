#include "selfsim/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "selfsim/dimension.hpp"
#include "selfsim/error.hpp"

namespace selfsim {

Interval project_interval(const Ball& ball, Vec2 e) {
    double n = norm(e);
    if (std::abs(n - 1.0) > 1e-12) throw Error("project_interval", "direction must be a unit vector");
    double c = dot(ball.center, e);
    return {c - 0.5 * ball.diameter, c + 0.5 * ball.diameter};
}

Word WordPool::unpack(std::size_t i) const {
    Word w(lengths[i]);
    std::uint64_t bits = packed[i];
    std::uint64_t mask = (1ULL << bits_per_letter) - 1;
    for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] = static_cast<std::uint32_t>(bits & mask);
        bits >>= bits_per_letter;
    }
    return w;
}

WordPool identity_word_pool(const IFSystem& sys, int max_length, std::size_t node_budget) {
    for (const auto& m : sys.maps)
        if (!m.iso.angle.rational)
            throw Error("word_pool", "identity word enumeration requires rational types");
    const std::uint32_t q = static_cast<std::uint32_t>(sys.size());
    int bpl = 1;
    while ((1u << bpl) < q) ++bpl;
    const int len_cap = 64 / bpl;
    if (max_length > len_cap) max_length = len_cap;

    WordPool pool;
    pool.bits_per_letter = bpl;

    // depth-first walk of the full word tree, level budget on visited nodes
    struct Node {
        Similitude sim;
        IsometryType type;
    };
    std::vector<Node> stack(static_cast<std::size_t>(max_length) + 1);
    std::vector<std::uint32_t> next(static_cast<std::size_t>(max_length) + 1, 0);
    std::uint64_t packed_word = 0;
    std::size_t visited = 0;
    int depth = 0;
    int reached = 0;
    bool truncated = false;
    while (true) {
        std::size_t d = static_cast<std::size_t>(depth);
        if (next[d] == q) {
            if (depth == 0) break;
            --depth;
            packed_word &= (1ULL << (bpl * depth)) - 1;
            ++next[static_cast<std::size_t>(depth)];
            continue;
        }
        std::uint32_t j = next[d];
        if (++visited > node_budget) {
            truncated = true;
            break;
        }
        const Similitude& m = sys.maps[j];
        Node& node = stack[d + 1];
        if (depth == 0) {
            node.sim = m;
            node.type = m.iso;
        } else {
            node.sim = compose(stack[d].sim, m);
            node.type = type_compose(stack[d].type, m.iso);
        }
        packed_word = (packed_word & ((1ULL << (bpl * depth)) - 1)) |
                      (static_cast<std::uint64_t>(j) << (bpl * depth));
        reached = std::max(reached, depth + 1);
        if (node.type.is_identity()) {
            pool.centers.push_back(node.sim.w);
            pool.diameters.push_back(node.sim.ratio);
            pool.packed.push_back(packed_word);
            pool.lengths.push_back(static_cast<std::uint8_t>(depth + 1));
        }
        if (depth + 1 < max_length) {
            ++depth;
            next[static_cast<std::size_t>(depth)] = 0;
        } else {
            ++next[d];
        }
    }
    pool.max_length = truncated ? std::max(1, reached - 1) : max_length;
    return pool;
}

namespace {

struct DpResult {
    double total = 0.0;
    std::vector<std::size_t> kept;  // indices into the sorted arrays
};

// Weighted interval scheduling: maximize sum d^{1-eps} over pairwise disjoint
// projected intervals, requiring a gap of gap_fraction * d_i before each kept
// interval. Nested intervals always overlap, so kept words are prefix-free.
DpResult select_intervals(const std::vector<double>& lo, const std::vector<double>& hi,
                          const std::vector<double>& weight, const std::vector<double>& diam,
                          double gap_fraction, bool recover) {
    const std::size_t n = lo.size();
    DpResult res;
    if (n == 0) return res;
    std::vector<double> f(n + 1, 0.0);
    std::vector<std::size_t> pred(n);
    for (std::size_t i = 0; i < n; ++i) {
        double cut = lo[i] - gap_fraction * diam[i];
        // last j with hi[j] < cut  (hi is sorted ascending)
        pred[i] = static_cast<std::size_t>(
            std::lower_bound(hi.begin(), hi.begin() + static_cast<std::ptrdiff_t>(i), cut) -
            hi.begin());
        f[i + 1] = std::max(f[i], weight[i] + f[pred[i]]);
    }
    res.total = f[n];
    if (recover) {
        std::size_t i = n;
        while (i > 0) {
            if (f[i] == f[i - 1]) {
                --i;
            } else {
                res.kept.push_back(i - 1);
                i = pred[i - 1];
            }
        }
        std::reverse(res.kept.begin(), res.kept.end());
    }
    return res;
}

struct SortedProjection {
    std::vector<double> lo, hi, weight, diam;
    std::vector<std::size_t> original;  // pool index per sorted position
};

SortedProjection project_pool(const WordPool& pool, Vec2 e, double eps) {
    const std::size_t n = pool.size();
    std::vector<std::size_t> order(n);
    std::vector<double> his(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
        his[i] = dot(pool.centers[i], e) + 0.5 * pool.diameters[i];
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (his[a] != his[b]) return his[a] < his[b];
        return a < b;
    });
    SortedProjection sp;
    sp.lo.resize(n);
    sp.hi.resize(n);
    sp.weight.resize(n);
    sp.diam.resize(n);
    sp.original.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t i = order[k];
        double d = pool.diameters[i];
        sp.hi[k] = his[i];
        sp.lo[k] = his[i] - d;
        sp.diam[k] = d;
        sp.weight[k] = std::pow(d, 1.0 - eps);
        sp.original[k] = i;
    }
    return sp;
}

}  // namespace

GoodFamily find_good_family(const IFSystem& sys, const WordPool& pool, Vec2 e, double eps,
                            double gap_fraction) {
    if (std::abs(norm(e) - 1.0) > 1e-12)
        throw Error("find_good_family", "direction must be a unit vector");
    if (!(eps > 0.0 && eps < 1.0)) throw Error("find_good_family", "eps must lie in (0,1)");
    SortedProjection sp = project_pool(pool, e, eps);
    DpResult dp = select_intervals(sp.lo, sp.hi, sp.weight, sp.diam, gap_fraction, true);
    if (!(dp.total > 1.0))
        throw Error("find_good_family",
                    "direction not certified: best sum d^{1-eps} = " + std::to_string(dp.total) +
                        " at pool depth " + std::to_string(pool.max_length));
    GoodFamily fam;
    fam.direction = e;
    fam.eps = eps;
    fam.weight_sum = dp.total;
    fam.words.reserve(dp.kept.size());
    fam.diameters.reserve(dp.kept.size());
    double min_gap = std::numeric_limits<double>::infinity();
    double prev_hi = 0.0;
    bool first = true;
    for (std::size_t k : dp.kept) {
        std::size_t i = sp.original[k];
        fam.words.push_back(pool.unpack(i));
        fam.diameters.push_back(pool.diameters[i]);
        fam.max_word_length = std::max(fam.max_word_length, static_cast<int>(pool.lengths[i]));
        if (!first) min_gap = std::min(min_gap, sp.lo[k] - prev_hi);
        prev_hi = sp.hi[k];
        first = false;
    }
    fam.exponent = fam.diameters.size() >= 2 ? moran_root(fam.diameters) : 0.0;
    fam.separation = min_gap;
    fam.stability = min_gap / 4.0;
    (void)sys;
    return fam;
}

GoodFamily find_good_family(const IFSystem& sys, Vec2 e, double eps, const FamilyOptions& opts) {
    WordPool pool = identity_word_pool(sys, opts.max_length, opts.node_budget);
    return find_good_family(sys, pool, e, eps, opts.gap_fraction);
}

std::vector<DirectionScore> scan_direction_scores(const WordPool& pool, double eps,
                                                  int grid_count, double gap_fraction) {
    if (grid_count < 8) throw Error("scan_directions", "grid_count must be >= 8");
    std::vector<DirectionScore> scores;
    scores.reserve(static_cast<std::size_t>(grid_count));
    for (int k = 0; k < grid_count; ++k) {
        double theta = std::numbers::pi * k / grid_count;
        Vec2 e{std::cos(theta), std::sin(theta)};
        SortedProjection sp = project_pool(pool, e, eps);
        DpResult dp = select_intervals(sp.lo, sp.hi, sp.weight, sp.diam, gap_fraction, false);
        std::size_t kept = 0;  // count only when recovering; estimate cheaply here
        scores.push_back({theta, e, dp.total, kept});
    }
    return scores;
}

std::vector<GoodFamily> scan_directions(const IFSystem& sys, double eps, int grid_count,
                                        const FamilyOptions& opts) {
    WordPool pool = identity_word_pool(sys, opts.max_length, opts.node_budget);
    std::vector<DirectionScore> scores = scan_direction_scores(pool, eps, grid_count,
                                                               opts.gap_fraction);
    std::vector<GoodFamily> out;
    for (const auto& sc : scores) {
        if (sc.weight_sum > 1.0)
            out.push_back(find_good_family(sys, pool, sc.direction, eps, opts.gap_fraction));
    }
    return out;
}

std::vector<Interval> family_intervals_at(const IFSystem& sys, const GoodFamily& family,
                                          Vec2 xi) {
    std::vector<Interval> out;
    out.reserve(family.words.size());
    for (std::size_t i = 0; i < family.words.size(); ++i) {
        Similitude m = word_map(sys, family.words[i]);
        double c = dot(m.w, xi);
        out.push_back({c - 0.5 * m.ratio, c + 0.5 * m.ratio});
    }
    return out;
}

bool family_disjoint_at(const IFSystem& sys, const GoodFamily& family, Vec2 xi) {
    std::vector<Interval> iv = family_intervals_at(sys, family, xi);
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo;
    });
    for (std::size_t i = 1; i < iv.size(); ++i)
        if (iv[i].lo <= iv[i - 1].hi) return false;
    return true;
}

}  // namespace selfsim
