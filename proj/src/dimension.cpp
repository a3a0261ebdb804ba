#include "selfsim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "selfsim/error.hpp"
#include "selfsim/system.hpp"

namespace selfsim {

namespace {

double weight_sum(std::span<const double> w, double s) {
    double acc = 0.0, comp = 0.0;  // Kahan
    for (double v : w) {
        double term = std::pow(v, s) - comp;
        double t = acc + term;
        comp = (t - acc) - term;
        acc = t;
    }
    return acc;
}

}  // namespace

double moran_root(std::span<const double> weights, double target, bool* exceeds_planar_dim) {
    if (weights.empty()) throw Error("moran_root", "empty weight list");
    if (!(target > 0.0)) throw Error("moran_root", "target must be positive");
    for (double w : weights)
        if (!(w > 0.0 && w < 1.0)) throw Error("moran_root", "weights must lie in (0,1)");
    if (!(static_cast<double>(weights.size()) > target))
        throw Error("moran_root", "no positive root: sum at s = 0 does not exceed target");
    double lo = 0.0, hi = 64.0;
    if (weight_sum(weights, hi) > target)
        throw Error("moran_root", "no root in [0, 64]");
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        if (weight_sum(weights, mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    double s = 0.5 * (lo + hi);
    if (exceeds_planar_dim) *exceeds_planar_dim = s > 2.0;
    return s;
}

double moran_root(const std::vector<double>& weights, double target, bool* exceeds_planar_dim) {
    return moran_root(std::span<const double>(weights), target, exceeds_planar_dim);
}

std::vector<Vec2> sample_attractor(const IFSystem& sys, std::size_t n_points,
                                   std::uint64_t seed) {
    if (n_points == 0) throw Error("sample_attractor", "n_points must be >= 1");
    std::mt19937_64 rng(seed);
    const std::size_t q = sys.maps.size();
    Vec2 x = fixed_point(sys.maps[0]);
    for (int i = 0; i < 100; ++i) x = apply(sys.maps[rng() % q], x);
    std::vector<Vec2> out;
    out.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        x = apply(sys.maps[rng() % q], x);
        out.push_back(x);
    }
    return out;
}

std::vector<double> default_box_scales() {
    std::vector<double> s;
    for (int k = 3; k <= 12; ++k) s.push_back(std::ldexp(1.0, -k));
    return s;
}

namespace {

std::uint64_t mix(std::uint64_t v) {
    v ^= v >> 33;
    v *= 0xff51afd7ed558ccdULL;
    v ^= v >> 33;
    v *= 0xc4ceb9fe1a85ec53ULL;
    v ^= v >> 33;
    return v;
}

DimensionEstimate fit_boxes(const std::vector<std::size_t>& counts,
                            const std::vector<double>& sizes) {
    DimensionEstimate est;
    for (std::size_t i = 0; i < sizes.size(); ++i) est.scales.emplace_back(sizes[i], counts[i]);
    // least squares on (log(1/size), log(count))
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (counts[i] == 0) continue;
        xs.push_back(std::log(1.0 / sizes[i]));
        ys.push_back(std::log(static_cast<double>(counts[i])));
    }
    const std::size_t n = xs.size();
    if (n < 2) {
        est.value = 0.0;
        est.fit_r2 = 1.0;
        return est;
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += xs[i]; my += ys[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double sse = std::max(0.0, syy - slope * sxy);
    est.value = std::clamp(slope, 0.0, 2.0);
    est.stderr_value = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
    est.fit_r2 = syy > 0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    return est;
}

}  // namespace

DimensionEstimate box_dimension(std::span<const Vec2> points, std::span<const double> scales) {
    std::vector<double> sizes(scales.begin(), scales.end());
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    std::vector<std::size_t> counts;
    std::unordered_set<std::uint64_t> cells;
    cells.reserve(points.size() * 2);
    for (double s : sizes) {
        cells.clear();
        for (const Vec2& p : points) {
            auto ix = static_cast<std::int64_t>(std::floor(p.x / s));
            auto iy = static_cast<std::int64_t>(std::floor(p.y / s));
            cells.insert(mix(static_cast<std::uint64_t>(ix) * 0x9e3779b97f4a7c15ULL ^
                             static_cast<std::uint64_t>(iy)));
        }
        counts.push_back(cells.size());
    }
    return fit_boxes(counts, sizes);
}

DimensionEstimate box_dimension(std::span<const double> values, std::span<const double> scales) {
    std::vector<double> sizes(scales.begin(), scales.end());
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    std::vector<std::size_t> counts;
    std::unordered_set<std::int64_t> cells;
    cells.reserve(values.size() * 2);
    for (double s : sizes) {
        cells.clear();
        for (double v : values) cells.insert(static_cast<std::int64_t>(std::floor(v / s)));
        counts.push_back(cells.size());
    }
    return fit_boxes(counts, sizes);
}

}  // namespace selfsim
