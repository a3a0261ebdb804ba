#pragma once

#include "selfsim/angle.hpp"
#include "selfsim/geometry.hpp"

namespace selfsim {

// Contractive planar similitude in the normal form
//     psi(z) = r e^{2 pi i theta} R(z) + w,
// with R the reflection z -> conj(z) when iso.reflect is set. The reflection
// acts first, then the rotation; this is the order the type algebra assumes.
struct Similitude {
    double ratio = 0.5;
    IsometryType iso;
    Vec2 w;
    double cos_t = 1.0;  // cached rotation entries
    double sin_t = 0.0;

    static Similitude create(double ratio, IsometryType iso, Vec2 w);
};

Vec2 apply(const Similitude& s, Vec2 x);
Similitude compose(const Similitude& a, const Similitude& b);

// Unique fixed point (I - L)^{-1} w of the affine map.
Vec2 fixed_point(const Similitude& s);

// Marker returned by word_map for the empty word. Not a valid Similitude
// (ratio 1); callers test with is_identity_marker before using it.
Similitude identity_marker();
bool is_identity_marker(const Similitude& s);

}  // namespace selfsim
