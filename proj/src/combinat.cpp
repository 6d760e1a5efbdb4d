#include "minigap/combinat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace minigap {

namespace {

void check_dprime(std::span<const int> dprime, int d) {
    if (dprime.empty()) throw std::invalid_argument("coordinate subset must be non-empty");
    int prev = 0;
    for (int i : dprime) {
        if (i <= prev || i > d)
            throw std::invalid_argument("coordinate subset must be strictly increasing within 1.." +
                                        std::to_string(d));
        prev = i;
    }
}

void check_guard(std::size_t n, std::size_t guard) {
    if (n * n > guard)
        throw std::runtime_error("energy histogram would need " + std::to_string(n * n) +
                                 " entries, over the guard of " + std::to_string(guard));
}

// Sort rows of `width` keys and return sum of squared run lengths.
std::int64_t squared_run_lengths(std::vector<std::uint64_t>& rows, std::size_t width) {
    const std::size_t count = rows.size() / width;
    std::vector<std::uint32_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    auto row_less = [&](std::uint32_t a, std::uint32_t b) {
        const std::uint64_t* ra = rows.data() + static_cast<std::size_t>(a) * width;
        const std::uint64_t* rb = rows.data() + static_cast<std::size_t>(b) * width;
        return std::lexicographical_compare(ra, ra + width, rb, rb + width);
    };
    auto row_eq = [&](std::uint32_t a, std::uint32_t b) {
        const std::uint64_t* ra = rows.data() + static_cast<std::size_t>(a) * width;
        const std::uint64_t* rb = rows.data() + static_cast<std::size_t>(b) * width;
        return std::equal(ra, ra + width, rb);
    };
    std::sort(order.begin(), order.end(), row_less);
    std::int64_t energy = 0;
    std::size_t i = 0;
    while (i < count) {
        std::size_t j = i + 1;
        while (j < count && row_eq(order[i], order[j])) ++j;
        auto run = static_cast<std::int64_t>(j - i);
        energy += run * run;
        i = j;
    }
    return energy;
}

}  // namespace

DiffSet diff_set_scalar(const IntSeq& seq) {
    seq.validate();
    const std::size_t n = seq.length();
    if (n < 2) throw std::invalid_argument("diff_set: need at least 2 terms");
    DiffSet ds;
    ds.dim = 1;
    ds.elems.reserve(n * (n - 1) / 2);
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = m + 1; k < n; ++k)
            ds.elems.push_back(seq.values[k] - seq.values[m]);
    std::sort(ds.elems.begin(), ds.elems.end());
    ds.elems.erase(std::unique(ds.elems.begin(), ds.elems.end()), ds.elems.end());
    return ds;
}

DiffSet diff_set_vector(const VecSeq& seq) {
    seq.validate();
    const std::size_t n = seq.length();
    if (n < 2) throw std::invalid_argument("diff_set: need at least 2 terms");
    const int d = seq.dim();
    const std::size_t pairs = n * (n - 1) / 2;

    std::vector<std::int64_t> rows(pairs * static_cast<std::size_t>(d));
    std::size_t r = 0;
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = m + 1; k < n; ++k) {
            for (int i = 0; i < d; ++i)
                rows[r * d + static_cast<std::size_t>(i)] =
                    seq.components[static_cast<std::size_t>(i)].values[k] -
                    seq.components[static_cast<std::size_t>(i)].values[m];
            ++r;
        }
    }

    std::vector<std::uint32_t> order(pairs);
    std::iota(order.begin(), order.end(), 0);
    auto row_less = [&](std::uint32_t a, std::uint32_t b) {
        const std::int64_t* ra = rows.data() + static_cast<std::size_t>(a) * d;
        const std::int64_t* rb = rows.data() + static_cast<std::size_t>(b) * d;
        return std::lexicographical_compare(ra, ra + d, rb, rb + d);
    };
    std::sort(order.begin(), order.end(), row_less);

    DiffSet ds;
    ds.dim = d;
    ds.elems.reserve(rows.size());
    const std::int64_t* prev = nullptr;
    for (std::uint32_t idx : order) {
        const std::int64_t* row = rows.data() + static_cast<std::size_t>(idx) * d;
        if (prev && std::equal(row, row + d, prev)) continue;
        ds.elems.insert(ds.elems.end(), row, row + d);
        prev = row;
    }
    return ds;
}

std::int64_t additive_energy(const IntSeq& seq, std::size_t guard) {
    seq.validate();
    const std::size_t n = seq.length();
    check_guard(n, guard);
    std::vector<std::uint64_t> sums;
    sums.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            sums.push_back(static_cast<std::uint64_t>(seq.values[i]) +
                           static_cast<std::uint64_t>(seq.values[j]));
    return squared_run_lengths(sums, 1);
}

std::int64_t joint_additive_energy(const VecSeq& seq, std::span<const int> dprime,
                                   std::size_t guard) {
    seq.validate();
    check_dprime(dprime, seq.dim());
    const std::size_t n = seq.length();
    check_guard(n, guard);
    const std::size_t width = dprime.size();
    std::vector<std::uint64_t> rows;
    rows.reserve(n * n * width);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (int coord : dprime) {
                const auto& vals = seq.components[static_cast<std::size_t>(coord - 1)].values;
                rows.push_back(static_cast<std::uint64_t>(vals[i]) +
                               static_cast<std::uint64_t>(vals[j]));
            }
        }
    }
    return squared_run_lengths(rows, width);
}

std::int64_t RepFunction::total() const {
    std::int64_t t = 0;
    for (const auto& [key, c] : counts) t += c;
    return t;
}

std::int64_t RepFunction::l2_squared() const {
    std::int64_t t = 0;
    for (const auto& [key, c] : counts) t += c * c;
    return t;
}

RepFunction rep_function(const VecSeq& seq, std::span<const int> dprime) {
    seq.validate();
    check_dprime(dprime, seq.dim());
    const std::size_t n = seq.length();
    if (n < 2) throw std::invalid_argument("rep_function: need at least 2 terms");

    RepFunction rep;
    rep.dprime.assign(dprime.begin(), dprime.end());
    std::vector<std::int64_t> key(dprime.size());
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            for (std::size_t k = 0; k < dprime.size(); ++k) {
                const auto& vals = seq.components[static_cast<std::size_t>(dprime[k] - 1)].values;
                key[k] = vals[a] - vals[b];
                if (key[k] == 0)
                    throw std::logic_error("rep_function: zero difference coordinate");
            }
            ++rep.counts[key];
        }
    }
    return rep;
}

double gcd_sum(std::span<const std::vector<std::int64_t>> elems, std::span<const double> weights) {
    if (elems.empty()) throw std::invalid_argument("gcd_sum: empty element list");
    if (elems.size() != weights.size())
        throw std::invalid_argument("gcd_sum: weight count does not match element count");
    const std::size_t width = elems[0].size();
    if (width == 0) throw std::invalid_argument("gcd_sum: elements must have at least 1 coordinate");
    for (const auto& e : elems) {
        if (e.size() != width) throw std::invalid_argument("gcd_sum: ragged element list");
        for (std::int64_t v : e)
            if (v < 1) throw std::invalid_argument("gcd_sum: coordinates must be positive");
    }
    for (double w : weights)
        if (!(w > 0)) throw std::invalid_argument("gcd_sum: weights must be positive");

    // Kahan accumulation; individual terms are O(1) but there are |A|^2.
    double sum = 0.0, comp = 0.0;
    for (std::size_t a = 0; a < elems.size(); ++a) {
        for (std::size_t b = 0; b < elems.size(); ++b) {
            double term = weights[a] * weights[b];
            for (std::size_t i = 0; i < width; ++i) {
                double g = static_cast<double>(std::gcd(elems[a][i], elems[b][i]));
                term *= g / std::sqrt(static_cast<double>(elems[a][i]) *
                                      static_cast<double>(elems[b][i]));
            }
            double y = term - comp;
            double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    return sum;
}

}  // namespace minigap
