#pragma once

#include <cstdint>

namespace selfsim {

// Rotation angle as a fraction of a full turn. Rational angles are exact
// reduced fractions with 0 <= num < den, so type algebra never drifts;
// irrational ones are plain doubles in [0,1) and never compare equal to a
// rational angle.
struct Angle {
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool rational = true;
    double irrational_value = 0.0;

    static Angle rational_turns(std::int64_t num, std::int64_t den);
    static Angle irrational_turns(double value);

    double turns() const;
    bool is_zero() const { return rational && num == 0; }
};

bool operator==(const Angle& a, const Angle& b);
inline bool operator!=(const Angle& a, const Angle& b) { return !(a == b); }

Angle angle_add(const Angle& a, const Angle& b);
Angle angle_sub(const Angle& a, const Angle& b);
Angle angle_neg(const Angle& a);

// The [O,R] class of a similitude: rotation angle plus reflection flag.
// Rational types form a finite group under type_compose.
struct IsometryType {
    Angle angle;
    bool reflect = false;

    bool is_identity() const { return !reflect && angle.is_zero(); }
    static IsometryType identity() { return {}; }
};

bool operator==(const IsometryType& a, const IsometryType& b);
inline bool operator!=(const IsometryType& a, const IsometryType& b) { return !(a == b); }

// Group law for the normal form z -> r e^{2 pi i theta} R(z) + w:
// theta_1 + (-1)^{reflect_1} theta_2 mod 1, reflections compose by xor.
IsometryType type_compose(const IsometryType& t1, const IsometryType& t2);
IsometryType type_inverse(const IsometryType& t);

// Least n >= 1 with the n-fold self-composition equal to the identity type.
// Reflective types always have order 2; a reduced rotation k/m has order m.
// Throws on irrational angles ("non-periodic type").
int type_order(const IsometryType& t);

}  // namespace selfsim
