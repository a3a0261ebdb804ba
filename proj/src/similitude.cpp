#include "selfsim/similitude.hpp"

#include <cmath>
#include <numbers>

#include "selfsim/error.hpp"

namespace selfsim {

namespace {

void set_rotation(Similitude& s) {
    const Angle& a = s.iso.angle;
    if (a.rational) {
        // exact values for the axis-aligned quarter turns
        std::int64_t num4 = 4 * a.num, den = a.den;
        if (num4 % den == 0) {
            switch ((num4 / den) % 4) {
                case 0: s.cos_t = 1.0; s.sin_t = 0.0; return;
                case 1: s.cos_t = 0.0; s.sin_t = 1.0; return;
                case 2: s.cos_t = -1.0; s.sin_t = 0.0; return;
                case 3: s.cos_t = 0.0; s.sin_t = -1.0; return;
            }
        }
    }
    double t = 2.0 * std::numbers::pi * a.turns();
    s.cos_t = std::cos(t);
    s.sin_t = std::sin(t);
}

}  // namespace

Similitude Similitude::create(double ratio, IsometryType iso, Vec2 w) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw Error("similitude", "contraction ratio must lie in (0,1)");
    Similitude s;
    s.ratio = ratio;
    s.iso = iso;
    s.w = w;
    set_rotation(s);
    return s;
}

Vec2 apply(const Similitude& s, Vec2 x) {
    double px = x.x;
    double py = s.iso.reflect ? -x.y : x.y;
    return {s.ratio * (s.cos_t * px - s.sin_t * py) + s.w.x,
            s.ratio * (s.sin_t * px + s.cos_t * py) + s.w.y};
}

Similitude compose(const Similitude& a, const Similitude& b) {
    Similitude out;
    out.ratio = a.ratio * b.ratio;
    out.iso = type_compose(a.iso, b.iso);
    out.w = apply(a, b.w);
    set_rotation(out);
    return out;
}

Vec2 fixed_point(const Similitude& s) {
    // linear part L = r * Rot(theta) * (reflection)
    double r = s.ratio;
    double a = r * s.cos_t, b = -r * s.sin_t;
    double c = r * s.sin_t, d = r * s.cos_t;
    if (s.iso.reflect) { b = -b; d = -d; }
    // solve (I - L) x = w
    double m00 = 1.0 - a, m01 = -b, m10 = -c, m11 = 1.0 - d;
    double det = m00 * m11 - m01 * m10;
    return {(m11 * s.w.x - m01 * s.w.y) / det, (-m10 * s.w.x + m00 * s.w.y) / det};
}

Similitude identity_marker() {
    Similitude s;
    s.ratio = 1.0;
    s.iso = IsometryType::identity();
    s.w = {0.0, 0.0};
    s.cos_t = 1.0;
    s.sin_t = 0.0;
    return s;
}

bool is_identity_marker(const Similitude& s) { return s.ratio == 1.0; }

}  // namespace selfsim
