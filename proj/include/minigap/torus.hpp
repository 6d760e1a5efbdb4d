#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "minigap/fraction64.hpp"
#include "minigap/rational.hpp"

namespace minigap {

// Flat point-major storage for N points on the d-torus.  Coordinates are
// either Fraction64 (points built from integer multiples of an alpha) or
// Rational (radical-inverse points); all engines are exact for both.
template <class C>
struct PointSet {
    std::size_t dim = 1;
    std::vector<C> coords;  // size = dim * count, point-major

    std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
    std::span<const C> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }

    // View of the first n points, sharing storage.
    PointSet prefix_copy(std::size_t n) const {
        PointSet p;
        p.dim = dim;
        p.coords.assign(coords.begin(), coords.begin() + n * dim);
        return p;
    }
};

// Sup-norm distance to the nearest integer lattice translate: the largest
// per-coordinate circle distance.  Always <= 1/2.
template <class C>
C nid_sup(std::span<const C> x, std::span<const C> y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("nid_sup: dimension mismatch");
    C best = circle_dist(x[0], y[0]);
    for (std::size_t i = 1; i < x.size(); ++i) {
        C di = circle_dist(x[i], y[i]);
        if (best < di) best = di;
    }
    return best;
}

// Minimal gap plus the first pair attaining it.  Witness indices are
// 0-based positions into the point list with first < second; among all
// attaining pairs the lexicographically smallest is reported, so every
// engine returns bit-identical results.
template <class C>
struct GapResultT {
    C value{};
    std::uint32_t first = 0;
    std::uint32_t second = 1;
};

using GapResult = GapResultT<Fraction64>;
using GapResultQ = GapResultT<Rational>;

namespace detail {

template <class C>
struct GapBest {
    C value{};
    std::uint32_t a = 0, b = 0;
    bool has = false;

    void offer(C v, std::uint32_t i, std::uint32_t j) {
        if (j < i) std::swap(i, j);
        if (!has || v < value || (v == value && (i < a || (i == a && j < b)))) {
            value = v;
            a = i;
            b = j;
            has = true;
        }
    }
};

// Cell index along one axis for a c-cell toroidal grid.
inline std::int64_t torus_cell(Fraction64 x, std::int64_t c) {
    return static_cast<std::int64_t>((static_cast<unsigned __int128>(x.u) * static_cast<std::uint64_t>(c)) >> 64);
}

inline std::int64_t torus_cell(Rational x, std::int64_t c) {
    return static_cast<std::int64_t>(static_cast<__int128>(x.num) * c / x.den);
}

// Exact test dist <= 1/c.
inline bool dist_leq_inv(Fraction64 d, std::int64_t c) {
    return static_cast<unsigned __int128>(d.u) * static_cast<std::uint64_t>(c) <=
           (static_cast<unsigned __int128>(1) << 64);
}

inline bool dist_leq_inv(Rational d, std::int64_t c) {
    return static_cast<__int128>(d.num) * c <= static_cast<__int128>(d.den);
}

inline std::int64_t int_root(std::int64_t n, int d) {
    auto pow_ok = [&](std::int64_t c) {
        __int128 acc = 1;
        for (int i = 0; i < d; ++i) {
            acc *= c;
            if (acc > n) return false;
        }
        return true;
    };
    auto c = static_cast<std::int64_t>(std::pow(static_cast<double>(n), 1.0 / d));
    while (c > 1 && !pow_ok(c)) --c;
    while (pow_ok(c + 1)) ++c;
    return c;
}

}  // namespace detail

// O(N^2) reference engine, valid for every dimension.  Scans pairs in
// lexicographic order, keeping strict improvements only, so the witness is
// automatically the smallest attaining pair.
template <class C>
GapResultT<C> min_gap_bruteforce(const PointSet<C>& ps) {
    const std::size_t n = ps.size();
    if (n < 2) throw std::invalid_argument("min_gap: need at least 2 points");
    GapResultT<C> best;
    bool has = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            C v = nid_sup(ps.point(i), ps.point(j));
            if (!has || v < best.value) {
                best.value = v;
                best.first = static_cast<std::uint32_t>(i);
                best.second = static_cast<std::uint32_t>(j);
                has = true;
            }
        }
    }
    return best;
}

// Sort-and-scan engine for dimension 1.  The minimal pairwise circle
// distance equals the smallest forward arc between circularly consecutive
// sorted points: every arc is at least that minimum, and any non-adjacent
// pair spans at least two arcs on both sides.  Ties (including duplicate
// points, where the minimum is 0) are resolved to the smallest witness over
// all arcs attaining the minimum.
template <class C>
GapResultT<C> min_gap_1d(const PointSet<C>& ps) {
    if (ps.dim != 1) throw std::invalid_argument("min_gap_1d: dimension must be 1");
    const std::size_t n = ps.size();
    if (n < 2) throw std::invalid_argument("min_gap: need at least 2 points");

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const C& xa = ps.coords[a];
        const C& xb = ps.coords[b];
        if (xa < xb) return true;
        if (xb < xa) return false;
        return a < b;
    });

    detail::GapBest<C> best;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t a = order[i];
        std::uint32_t b = order[(i + 1) % n];
        if (a == b) continue;  // n == 1 cannot happen; guards self-pairing anyway
        C arc = sub_mod1(ps.coords[a], ps.coords[b]);
        best.offer(arc, a, b);
    }
    return {best.value, best.a, best.b};
}

// Toroidal cell-grid engine for dimension >= 2, with c = max(1, floor(N^(1/d)))
// cells per axis.  Any pair at sup-distance <= 1/c lands in the same or
// adjacent cells (with wraparound), so scanning those neighborhoods sees
// every pair that can attain such a distance.  If the best candidate found
// is still larger than 1/c (or no candidate exists at all, e.g. points
// isolated in empty neighborhoods), nothing proves it minimal and the
// engine falls back to the full scan.
template <class C>
GapResultT<C> min_gap_sup(const PointSet<C>& ps) {
    if (ps.dim < 2) throw std::invalid_argument("min_gap_sup: dimension must be >= 2");
    const std::size_t n = ps.size();
    if (n < 2) throw std::invalid_argument("min_gap: need at least 2 points");
    const int d = static_cast<int>(ps.dim);

    const std::int64_t c = std::max<std::int64_t>(1, detail::int_root(static_cast<std::int64_t>(n), d));
    if (c < 2) return min_gap_bruteforce(ps);

    std::int64_t n_cells = 1;
    for (int i = 0; i < d; ++i) n_cells *= c;

    std::vector<std::vector<std::uint32_t>> cells(static_cast<std::size_t>(n_cells));
    for (std::size_t p = 0; p < n; ++p) {
        auto pt = ps.point(p);
        std::int64_t idx = 0;
        for (int i = 0; i < d; ++i) idx = idx * c + detail::torus_cell(pt[i], c);
        cells[static_cast<std::size_t>(idx)].push_back(static_cast<std::uint32_t>(p));
    }

    detail::GapBest<C> best;
    auto consider = [&](std::uint32_t i, std::uint32_t j) {
        best.offer(nid_sup(ps.point(i), ps.point(j)), i, j);
    };

    std::vector<std::int64_t> axis(static_cast<std::size_t>(d));
    std::vector<std::int64_t> neighbors;
    for (std::int64_t cell = 0; cell < n_cells; ++cell) {
        if (cells[static_cast<std::size_t>(cell)].empty()) continue;
        std::int64_t rest = cell;
        for (int i = d - 1; i >= 0; --i) {
            axis[static_cast<std::size_t>(i)] = rest % c;
            rest /= c;
        }
        // Enumerate the 3^d neighborhood with wraparound; duplicates appear
        // when c == 2, so the list is deduplicated before use.
        neighbors.clear();
        std::size_t combos = 1;
        for (int i = 0; i < d; ++i) combos *= 3;
        for (std::size_t m = 0; m < combos; ++m) {
            std::size_t mm = m;
            std::int64_t idx = 0;
            for (int i = 0; i < d; ++i) {
                std::int64_t off = static_cast<std::int64_t>(mm % 3) - 1;
                mm /= 3;
                std::int64_t a = (axis[static_cast<std::size_t>(i)] + off + c) % c;
                idx = idx * c + a;
            }
            neighbors.push_back(idx);
        }
        std::sort(neighbors.begin(), neighbors.end());
        neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());

        const auto& mine = cells[static_cast<std::size_t>(cell)];
        for (std::int64_t nb : neighbors) {
            if (nb < cell) continue;  // each unordered cell pair once
            const auto& theirs = cells[static_cast<std::size_t>(nb)];
            if (theirs.empty()) continue;
            if (nb == cell) {
                for (std::size_t x = 0; x + 1 < mine.size(); ++x)
                    for (std::size_t y = x + 1; y < mine.size(); ++y) consider(mine[x], mine[y]);
            } else {
                for (std::uint32_t i : mine)
                    for (std::uint32_t j : theirs) consider(i, j);
            }
        }
    }

    if (!best.has || !detail::dist_leq_inv(best.value, c)) return min_gap_bruteforce(ps);
    return {best.value, best.a, best.b};
}

}  // namespace minigap
