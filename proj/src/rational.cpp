#include "minigap/rational.hpp"

#include <limits>
#include <stdexcept>

namespace minigap {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational reduce(i128 num, i128 den) {
    if (den <= 0) throw std::invalid_argument("Rational: denominator must be positive");
    if (num < 0) throw std::invalid_argument("Rational: value must be non-negative");
    if (num == 0) return {0, 1};
    i128 g = gcd128(num, den);
    num /= g;
    den /= g;
    if (num > std::numeric_limits<std::int64_t>::max() ||
        den > std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error("Rational: reduced fraction exceeds int64");
    return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
    Rational r = reduce(num, den);
    if (static_cast<i128>(r.num) >= static_cast<i128>(r.den))
        throw std::invalid_argument("Rational: point value must lie in [0, 1)");
    return r;
}

Rational Rational::frac(std::int64_t num, std::int64_t den) {
    return reduce(num, den);
}

std::string Rational::str() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

std::strong_ordering operator<=>(Rational a, Rational b) {
    i128 lhs = static_cast<i128>(a.num) * b.den;
    i128 rhs = static_cast<i128>(b.num) * a.den;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational sub_mod1(Rational a, Rational b) {
    i128 num = static_cast<i128>(b.num) * a.den - static_cast<i128>(a.num) * b.den;
    i128 den = static_cast<i128>(a.den) * b.den;
    if (num < 0) num += den;
    return reduce(num, den);
}

Rational circle_dist(Rational a, Rational b) {
    Rational fwd = sub_mod1(a, b);
    Rational bwd = sub_mod1(b, a);
    return fwd < bwd ? fwd : bwd;
}

}  // namespace minigap
