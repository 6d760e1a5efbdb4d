#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace minigap {

// A point of the unit circle R/Z stored as u / 2^64 with u a plain uint64_t.
//
// Because the denominator is exactly the word size, wrapping addition and
// wrapping multiplication by an integer are *exact* arithmetic mod 1 on the
// represented values: (u + v) mod 2^64 encodes {x + y}, and (z * u) mod 2^64
// encodes {z * x}.  No rounding ever happens until to_double() is called.
struct Fraction64 {
    std::uint64_t u = 0;

    friend constexpr auto operator<=>(Fraction64, Fraction64) = default;

    double to_double() const { return std::ldexp(static_cast<double>(u), -64); }
};

constexpr Fraction64 frac_add(Fraction64 a, Fraction64 b) { return {a.u + b.u}; }

// (b - a) mod 1, i.e. the forward arc length from a to b.
constexpr Fraction64 sub_mod1(Fraction64 a, Fraction64 b) { return {b.u - a.u}; }

// {z * a}.  The multiplier must lie in [1, 2^63); sequence values are kept
// below that limit so the product is well defined for every term.
inline Fraction64 frac_mul(std::int64_t z, Fraction64 a) {
    if (z < 1 || static_cast<std::uint64_t>(z) >= (std::uint64_t{1} << 63))
        throw std::out_of_range("frac_mul: multiplier must lie in [1, 2^63)");
    return {static_cast<std::uint64_t>(z) * a.u};
}

// {sum_i c_i * alpha_i}.  Coefficients in [0, 2^63); exact mod 1 because
// every product and the running sum wrap mod 2^64.
inline Fraction64 linear_form_frac(std::span<const std::int64_t> coeffs,
                                   std::span<const Fraction64> alpha) {
    if (coeffs.size() != alpha.size())
        throw std::invalid_argument("linear_form_frac: dimension mismatch");
    if (coeffs.empty())
        throw std::invalid_argument("linear_form_frac: empty form");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] < 0 || static_cast<std::uint64_t>(coeffs[i]) >= (std::uint64_t{1} << 63))
            throw std::out_of_range("linear_form_frac: coefficient out of [0, 2^63)");
        acc += static_cast<std::uint64_t>(coeffs[i]) * alpha[i].u;
    }
    return {acc};
}

// Distance to the nearest integer translate: min over both arcs, always <= 1/2.
constexpr Fraction64 circle_dist(Fraction64 a, Fraction64 b) {
    std::uint64_t w = a.u - b.u;
    std::uint64_t v = 0 - w;
    return {w < v ? w : v};
}

}  // namespace minigap
