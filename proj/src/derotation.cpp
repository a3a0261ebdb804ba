#include "selfsim/derotation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <unordered_map>

#include "selfsim/dimension.hpp"
#include "selfsim/error.hpp"
#include "selfsim/separation.hpp"

namespace selfsim {

namespace {

struct TypeKey {
    std::int64_t num, den;
    bool reflect;
    bool operator==(const TypeKey&) const = default;
};

struct TypeKeyHash {
    std::size_t operator()(const TypeKey& k) const {
        std::uint64_t h = static_cast<std::uint64_t>(k.num) * 0x9e3779b97f4a7c15ULL;
        h ^= static_cast<std::uint64_t>(k.den) + (h << 6) + (h >> 2);
        return h ^ (k.reflect ? 0x5851f42d4c957f2dULL : 0);
    }
};

TypeKey key_of(const IsometryType& t) { return {t.angle.num, t.angle.den, t.reflect}; }

}  // namespace

int TypeTable::find(const IsometryType& t) const {
    for (std::size_t i = 0; i < types.size(); ++i)
        if (types[i] == t) return static_cast<int>(i);
    return -1;
}

const Word& TypeTable::killing_word_for(const IsometryType& t) const {
    int i = find(t);
    if (i < 0) throw Error("type_table", "type not in closure table");
    return killing_words[static_cast<std::size_t>(i)];
}

TypeTable type_closure(const IFSystem& sys) {
    for (const auto& m : sys.maps)
        if (!m.iso.angle.rational)
            throw Error("type_closure", "derotation requires rational types");

    // closure of the generator types under right-composition
    std::unordered_map<TypeKey, int, TypeKeyHash> index;
    std::vector<IsometryType> types;
    std::deque<IsometryType> frontier;
    auto add = [&](const IsometryType& t) {
        auto [it, fresh] = index.emplace(key_of(t), static_cast<int>(types.size()));
        if (fresh) {
            types.push_back(t);
            frontier.push_back(t);
        }
    };
    for (const auto& m : sys.maps) add(m.iso);
    while (!frontier.empty()) {
        IsometryType t = frontier.front();
        frontier.pop_front();
        for (const auto& m : sys.maps) add(type_compose(t, m.iso));
    }

    // shortest word (lexicographic tie-break) reaching each group element from
    // the identity; killing word for tau is the word reaching tau^{-1}
    std::unordered_map<TypeKey, Word, TypeKeyHash> reach;
    std::deque<std::pair<IsometryType, Word>> queue;
    reach[key_of(IsometryType::identity())] = {};
    queue.emplace_back(IsometryType::identity(), Word{});
    while (!queue.empty()) {
        auto [t, w] = queue.front();
        queue.pop_front();
        for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(sys.size()); ++j) {
            IsometryType nt = type_compose(t, sys.maps[j].iso);
            TypeKey k = key_of(nt);
            if (reach.contains(k)) continue;
            Word nw = w;
            nw.push_back(j);
            reach.emplace(k, nw);
            queue.emplace_back(nt, std::move(nw));
        }
    }

    TypeTable table;
    table.types = std::move(types);
    table.killing_words.reserve(table.types.size());
    for (const auto& t : table.types) {
        auto it = reach.find(key_of(type_inverse(t)));
        if (it == reach.end())
            throw Error("type_closure", "inverse type unreachable (should not happen)");
        table.killing_words.push_back(it->second);
        table.max_killing_length =
            std::max(table.max_killing_length, static_cast<int>(it->second.size()));
    }
    return table;
}

DerotationResult derotate(const IFSystem& sys, double eps, int max_iterations,
                          std::size_t budget) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error("derotate", "eps must lie in (0,1)");
    if (!check_very_strong_separation(sys))
        throw Error("derotate", "input system must satisfy very strong separation");
    TypeTable table = type_closure(sys);

    struct Entry {
        Word word;
        Similitude sim;
        IsometryType type;  // exact
    };

    const double t = sys.sim_dimension;
    const double good_exp = 1.0 - eps;
    DerotationResult res;
    std::vector<Entry> bad;
    double good_mass = 0.0;       // sum of r^t over accumulated good words
    double good_criterion = 0.0;  // sum of r^{1-eps}

    auto classify = [&](Entry e) {
        if (e.type.is_identity()) {
            good_mass += std::pow(e.sim.ratio, t);
            good_criterion += std::pow(e.sim.ratio, good_exp);
            res.words.push_back(std::move(e.word));
        } else {
            bad.push_back(std::move(e));
        }
    };

    for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(sys.size()); ++j)
        classify({Word{j}, sys.maps[j], sys.maps[j].iso});

    auto record_trace = [&] {
        double bad_mass = 0.0;
        for (const auto& e : bad) bad_mass += std::pow(e.sim.ratio, t);
        res.bad_mass_trace.push_back(bad_mass);
        res.good_mass_trace.push_back(good_mass);
    };
    record_trace();
    res.iterations = 1;

    while (good_criterion <= 1.0) {
        if (res.iterations >= max_iterations) {
            std::string trace;
            for (double m : res.bad_mass_trace) trace += std::to_string(m) + " ";
            throw Error("derotate", "max iterations exhausted (eps too aggressive?); "
                                    "bad mass trace: " + trace);
        }
        if (bad.empty()) break;  // nothing left to rewrite and criterion unreachable
        std::size_t expansion = 0;
        for (const auto& e : bad) {
            std::size_t k = table.killing_word_for(e.type).size();
            double cnt = std::pow(static_cast<double>(sys.size()), static_cast<double>(k));
            expansion += static_cast<std::size_t>(cnt);
        }
        if (expansion > budget)
            throw Error("derotate", "iteration would expand " + std::to_string(expansion) +
                                        " words, over budget " + std::to_string(budget));
        std::vector<Entry> current;
        current.swap(bad);
        for (auto& e : current) {
            const std::size_t k = table.killing_word_for(e.type).size();
            // all q^k right-extensions of length k
            Word suffix(k, 0);
            while (true) {
                Entry child;
                child.word = e.word;
                child.sim = e.sim;
                child.type = e.type;
                for (std::uint32_t idx : suffix) {
                    child.word.push_back(idx);
                    child.sim = compose(child.sim, sys.maps[idx]);
                    child.type = type_compose(child.type, sys.maps[idx].iso);
                }
                classify(std::move(child));
                // next suffix in lexicographic order
                std::size_t pos = k;
                while (pos > 0) {
                    if (++suffix[pos - 1] < static_cast<std::uint32_t>(sys.size())) break;
                    suffix[pos - 1] = 0;
                    --pos;
                }
                if (pos == 0) break;
            }
        }
        ++res.iterations;
        record_trace();
    }

    if (good_criterion <= 1.0)
        throw Error("derotate", "good words exhausted without reaching sum r^{1-eps} > 1");

    std::sort(res.words.begin(), res.words.end());
    res.system = subsystem_from_words(sys, res.words);
    return res;
}

}  // namespace selfsim
