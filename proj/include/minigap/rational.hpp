#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace minigap {

// Exact fraction num/den in lowest terms with 0 <= num < den.  Used for
// radical-inverse points, whose denominators are powers of the digit base and
// therefore not representable on the 2^64 grid unless the base is 2.
// Comparisons and arithmetic cross-multiply in 128-bit intermediates, so the
// type stays exact for every denominator that fits in int64.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    // Validates den > 0 and 0 <= num < den, then reduces.
    static Rational make(std::int64_t num, std::int64_t den);

    // Like make but without the num < den requirement, for exact values
    // outside [0, 1) such as bound envelopes.
    static Rational frac(std::int64_t num, std::int64_t den);

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;  // "num/den"

    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
};

std::strong_ordering operator<=>(Rational a, Rational b);

// (b - a) mod 1, the forward arc from a to b.
Rational sub_mod1(Rational a, Rational b);

// Distance to the nearest integer translate, always <= 1/2.
Rational circle_dist(Rational a, Rational b);

}  // namespace minigap
