#include "selfsim/system.hpp"

#include <cmath>
#include <string>

#include "selfsim/dimension.hpp"
#include "selfsim/error.hpp"

namespace selfsim {

bool maps_into_reference_ball(const Similitude& s) {
    return norm(s.w) + 0.5 * s.ratio <= 0.5 + 1e-12;
}

IFSystem IFSystem::create(std::vector<Similitude> maps) {
    if (maps.empty()) throw Error("ifs", "empty similitude list");
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (!maps_into_reference_ball(maps[i]))
            throw Error("ifs", "map " + std::to_string(i) +
                                   " does not send the reference ball into itself; "
                                   "run normalize_into_ball first");
    }
    IFSystem sys;
    sys.maps = std::move(maps);
    std::vector<double> ratios;
    ratios.reserve(sys.maps.size());
    for (const auto& m : sys.maps) ratios.push_back(m.ratio);
    sys.sim_dimension = ratios.size() == 1 ? 0.0 : moran_root(ratios);
    return sys;
}

NormalizationResult normalize_into_ball(const std::vector<Similitude>& maps) {
    if (maps.empty()) throw Error("normalize", "empty similitude list");
    double lambda = 1.0;
    for (const auto& m : maps) {
        if (!(m.ratio > 0.0 && m.ratio < 1.0))
            throw Error("normalize", "contraction ratio must lie in (0,1)");
        double wn = norm(m.w);
        if (wn > 0.0) lambda = std::min(lambda, (0.5 - 0.5 * m.ratio) / wn);
    }
    if (!(lambda > 0.0)) throw Error("normalize", "no admissible scaling factor");
    std::vector<Similitude> scaled;
    scaled.reserve(maps.size());
    for (const auto& m : maps) scaled.push_back(Similitude::create(m.ratio, m.iso, lambda * m.w));
    return {IFSystem::create(std::move(scaled)), lambda};
}

ZeroTranslationResult normalize_zero_translation(const IFSystem& sys, int j) {
    if (j < 0 || j >= sys.size()) throw Error("normalize", "map index out of range");
    Vec2 p = fixed_point(sys.maps[j]);
    std::vector<Similitude> conj;
    conj.reserve(sys.maps.size());
    for (const auto& m : sys.maps) {
        // t o psi o t^{-1} with t(z) = z - p
        Vec2 w = apply(m, p) - p;
        conj.push_back(Similitude::create(m.ratio, m.iso, w));
    }
    conj[static_cast<std::size_t>(j)].w = {0.0, 0.0};  // exact by construction
    NormalizationResult n = normalize_into_ball(conj);
    return {std::move(n.system), n.lambda, p, j};
}

Similitude word_map(const IFSystem& sys, const Word& w) {
    if (w.empty()) return identity_marker();
    Similitude acc = sys.maps.at(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) acc = compose(acc, sys.maps.at(w[i]));
    return acc;
}

IsometryType word_type(const IFSystem& sys, const Word& w) {
    IsometryType t = IsometryType::identity();
    for (auto i : w) t = type_compose(t, sys.maps.at(i).iso);
    return t;
}

std::vector<Ball> generation_balls(const IFSystem& sys, int n, std::size_t budget) {
    if (n < 0) throw Error("generation_balls", "negative generation");
    const std::size_t q = sys.maps.size();
    double count = std::pow(static_cast<double>(q), n);
    if (count > static_cast<double>(budget))
        throw Error("generation_balls",
                    "q^n = " + std::to_string(count) + " exceeds enumeration budget " +
                        std::to_string(budget));
    std::vector<Ball> out;
    out.reserve(static_cast<std::size_t>(count));
    if (n == 0) {
        out.push_back({{0.0, 0.0}, 1.0, {}});
        return out;
    }
    // iterative DFS, lexicographic in words
    struct Frame { Similitude sim; int depth; };
    Word word(static_cast<std::size_t>(n));
    std::vector<Similitude> stack(static_cast<std::size_t>(n));
    std::vector<std::uint32_t> next(static_cast<std::size_t>(n), 0);
    int depth = 0;
    while (true) {
        if (next[static_cast<std::size_t>(depth)] == q) {
            if (depth == 0) break;
            --depth;
            ++next[static_cast<std::size_t>(depth)];
            continue;
        }
        std::uint32_t j = next[static_cast<std::size_t>(depth)];
        word[static_cast<std::size_t>(depth)] = j;
        const Similitude& m = sys.maps[j];
        stack[static_cast<std::size_t>(depth)] =
            depth == 0 ? m : compose(stack[static_cast<std::size_t>(depth - 1)], m);
        if (depth == n - 1) {
            const Similitude& s = stack[static_cast<std::size_t>(depth)];
            out.push_back({s.w, s.ratio, word});
            ++next[static_cast<std::size_t>(depth)];
        } else {
            ++depth;
            next[static_cast<std::size_t>(depth)] = 0;
        }
    }
    return out;
}

IFSystem subsystem_from_words(const IFSystem& sys, const std::vector<Word>& words) {
    std::vector<Similitude> maps;
    maps.reserve(words.size());
    for (const auto& w : words) {
        if (w.empty()) throw Error("subsystem", "empty word in subsystem");
        maps.push_back(word_map(sys, w));
    }
    return IFSystem::create(std::move(maps));
}

}  // namespace selfsim
