#include "selfsim/angle.hpp"

#include <cmath>
#include <numeric>

#include "selfsim/error.hpp"

namespace selfsim {

namespace {

constexpr std::int64_t kMaxDenominator = 1'000'000'000'000'000LL;  // overflow guard

Angle make_reduced(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw Error("angle", "denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    std::int64_t g = std::gcd(num, den);
    Angle a;
    a.num = num / g;
    a.den = den / g;
    a.rational = true;
    return a;
}

}  // namespace

Angle Angle::rational_turns(std::int64_t num, std::int64_t den) {
    return make_reduced(num, den);
}

Angle Angle::irrational_turns(double value) {
    Angle a;
    a.rational = false;
    a.irrational_value = value - std::floor(value);
    a.num = 0;
    a.den = 1;
    return a;
}

double Angle::turns() const {
    if (rational) return static_cast<double>(num) / static_cast<double>(den);
    return irrational_value;
}

bool operator==(const Angle& a, const Angle& b) {
    if (a.rational != b.rational) return false;
    if (a.rational) return a.num == b.num && a.den == b.den;
    return a.irrational_value == b.irrational_value;
}

namespace {

Angle add_signed(const Angle& a, const Angle& b, int sign) {
    if (a.rational && b.rational) {
        __int128 den = static_cast<__int128>(a.den) / std::gcd(a.den, b.den) * b.den;
        if (den > kMaxDenominator)
            throw Error("angle", "angle denominator overflow in composition");
        std::int64_t d = static_cast<std::int64_t>(den);
        __int128 num = static_cast<__int128>(a.num) * (d / a.den) +
                       static_cast<__int128>(sign) * b.num * (d / b.den);
        __int128 m = num % d;
        if (m < 0) m += d;
        return make_reduced(static_cast<std::int64_t>(m), d);
    }
    double v = a.turns() + sign * b.turns();
    return Angle::irrational_turns(v);
}

}  // namespace

Angle angle_add(const Angle& a, const Angle& b) { return add_signed(a, b, +1); }
Angle angle_sub(const Angle& a, const Angle& b) { return add_signed(a, b, -1); }

Angle angle_neg(const Angle& a) {
    if (a.rational) return make_reduced(-a.num, a.den);
    return Angle::irrational_turns(-a.irrational_value);
}

bool operator==(const IsometryType& a, const IsometryType& b) {
    return a.reflect == b.reflect && a.angle == b.angle;
}

IsometryType type_compose(const IsometryType& t1, const IsometryType& t2) {
    IsometryType out;
    out.reflect = t1.reflect != t2.reflect;
    out.angle = t1.reflect ? angle_sub(t1.angle, t2.angle) : angle_add(t1.angle, t2.angle);
    return out;
}

IsometryType type_inverse(const IsometryType& t) {
    if (t.reflect) return t;  // reflective types are involutions
    IsometryType out;
    out.angle = angle_neg(t.angle);
    return out;
}

int type_order(const IsometryType& t) {
    if (!t.angle.rational) throw Error("type_order", "non-periodic type");
    if (t.reflect) return 2;
    if (t.angle.den > 1'000'000'000LL) throw Error("type_order", "denominator too large");
    return static_cast<int>(t.angle.den);
}

}  // namespace selfsim
