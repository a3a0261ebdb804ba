#include "selfsim/separation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "selfsim/dimension.hpp"
#include "selfsim/error.hpp"

namespace selfsim {

namespace {

bool disjoint(const Vec2& c1, double d1, const Vec2& c2, double d2) {
    double rr = 0.5 * (d1 + d2);
    return norm2(c1 - c2) > rr * rr;
}

// uniform grid over ball centers, cell = largest diameter, for near-linear
// pairwise disjointness queries
class BallGrid {
public:
    explicit BallGrid(double cell) : cell_(cell) {}

    bool conflicts(const Vec2& c, double d, const std::vector<Ball>& taken) const {
        auto [ix, iy] = index(c);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = cells_.find(key(ix + dx, iy + dy));
                if (it == cells_.end()) continue;
                for (std::size_t k : it->second)
                    if (!disjoint(c, d, taken[k].center, taken[k].diameter)) return true;
            }
        return false;
    }

    void insert(const Vec2& c, std::size_t id) {
        auto [ix, iy] = index(c);
        cells_[key(ix, iy)].push_back(id);
    }

private:
    std::pair<std::int64_t, std::int64_t> index(const Vec2& c) const {
        return {static_cast<std::int64_t>(std::floor(c.x / cell_)),
                static_cast<std::int64_t>(std::floor(c.y / cell_))};
    }
    static std::uint64_t key(std::int64_t ix, std::int64_t iy) {
        return (static_cast<std::uint64_t>(ix) << 32) ^ static_cast<std::uint32_t>(iy);
    }
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

}  // namespace

bool balls_pairwise_disjoint(const std::vector<Ball>& balls) {
    if (balls.size() < 2) return true;
    double dmax = 0.0;
    for (const auto& b : balls) dmax = std::max(dmax, b.diameter);
    BallGrid grid(dmax);
    std::vector<Ball> taken;
    taken.reserve(balls.size());
    for (const auto& b : balls) {
        if (grid.conflicts(b.center, b.diameter, taken)) return false;
        grid.insert(b.center, taken.size());
        taken.push_back(b);
    }
    return true;
}

bool check_very_strong_separation(const IFSystem& sys) {
    for (int i = 0; i < sys.size(); ++i)
        for (int j = i + 1; j < sys.size(); ++j)
            if (!disjoint(sys.maps[i].w, sys.maps[i].ratio, sys.maps[j].w, sys.maps[j].ratio))
                return false;
    return true;
}

std::vector<Ball> vitali_disjoint_subfamily(const std::vector<Ball>& balls) {
    if (balls.empty()) throw Error("vitali", "empty ball list");
    std::vector<std::size_t> order(balls.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (balls[a].diameter != balls[b].diameter) return balls[a].diameter > balls[b].diameter;
        return balls[a].word < balls[b].word;
    });
    double dmax = balls[order[0]].diameter;
    BallGrid grid(dmax);
    std::vector<Ball> taken;
    for (std::size_t i : order) {
        const Ball& b = balls[i];
        if (grid.conflicts(b.center, b.diameter, taken)) continue;
        grid.insert(b.center, taken.size());
        taken.push_back(b);
    }
    return taken;
}

bool vitali_five_cover_holds(const std::vector<Ball>& all, const std::vector<Ball>& selected) {
    for (const auto& b : all) {
        bool covered = false;
        for (const auto& s : selected) {
            if (s.diameter < b.diameter) continue;
            if (norm(b.center - s.center) <= 2.5 * s.diameter) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

SeparatedSubsystem extract_separated_subsystem(const IFSystem& sys, double target_dim,
                                               int max_generation, std::size_t budget) {
    double best = 0.0;
    int best_n = 0;
    for (int n = 1; n <= max_generation; ++n) {
        double count = std::pow(static_cast<double>(sys.size()), n);
        if (count > static_cast<double>(budget)) break;
        std::vector<Ball> balls = generation_balls(sys, n, budget);
        std::vector<Ball> sel = vitali_disjoint_subfamily(balls);
        double s_n = 0.0;
        if (sel.size() >= 2) {
            std::vector<double> diams;
            diams.reserve(sel.size());
            for (const auto& b : sel) diams.push_back(b.diameter);
            s_n = moran_root(diams);
        }
        if (s_n > best) { best = s_n; best_n = n; }
        if (s_n > target_dim) {
            SeparatedSubsystem out;
            out.generation = n;
            out.sub_dimension = s_n;
            out.words.reserve(sel.size());
            for (auto& b : sel) out.words.push_back(std::move(b.word));
            return out;
        }
    }
    throw Error("extract_separated_subsystem",
                "target dimension " + std::to_string(target_dim) +
                    " not reached within budget; best s_n = " + std::to_string(best) +
                    " at generation " + std::to_string(best_n));
}

SeparatedSubsystem preserve_irrational(const IFSystem& sys, SeparatedSubsystem sub, int j) {
    if (j < 0 || j >= sys.size()) throw Error("preserve_irrational", "map index out of range");
    if (sys.maps[static_cast<std::size_t>(j)].iso.angle.rational)
        throw Error("preserve_irrational", "map carries a rational angle");
    if (sub.words.empty()) throw Error("preserve_irrational", "empty subsystem");
    std::size_t pick = 0;
    double pick_d = 2.0;
    for (std::size_t i = 0; i < sub.words.size(); ++i) {
        double d = word_map(sys, sub.words[i]).ratio;
        if (d < pick_d || (d == pick_d && sub.words[i] < sub.words[pick])) {
            pick_d = d;
            pick = i;
        }
    }
    sub.words[pick].push_back(static_cast<std::uint32_t>(j));
    std::vector<double> diams;
    diams.reserve(sub.words.size());
    for (const auto& w : sub.words) diams.push_back(word_map(sys, w).ratio);
    sub.sub_dimension = diams.size() >= 2 ? moran_root(diams) : 0.0;
    return sub;
}

}  // namespace selfsim
