#pragma once

#include <cmath>

namespace selfsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline Vec2 normalized(Vec2 v) {
    double n = norm(v);
    return {v.x / n, v.y / n};
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

inline bool intervals_disjoint(const Interval& a, const Interval& b) {
    return a.hi < b.lo || b.hi < a.lo;
}

// |x - p2| - |x - p1| without cancellation when |x| is much larger than
// |p1|, |p2|. Needed by the pinned-distance machinery, where pins sit at
// distance ~1/alpha from the unit ball but interval gaps are tiny.
inline double distance_difference(Vec2 x, Vec2 p2, Vec2 p1) {
    double a = norm(x - p2);
    double b = norm(x - p1);
    Vec2 dp = p2 - p1;
    double num = -2.0 * (x.x * dp.x + x.y * dp.y) + (norm2(p2) - norm2(p1));
    return num / (a + b);
}

}  // namespace selfsim
