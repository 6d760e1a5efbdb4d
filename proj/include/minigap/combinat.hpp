#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "minigap/seq.hpp"

namespace minigap {

// Positive differences a_n - a_m over n > m (componentwise for vectors),
// deduplicated and sorted lexicographically for stable serialization.
struct DiffSet {
    int dim = 1;
    std::vector<std::int64_t> elems;  // row-major, cardinality() rows of dim entries

    std::size_t cardinality() const { return dim == 0 ? 0 : elems.size() / dim; }
    std::span<const std::int64_t> row(std::size_t i) const {
        return {elems.data() + static_cast<std::size_t>(dim) * i, static_cast<std::size_t>(dim)};
    }
};

DiffSet diff_set_scalar(const IntSeq& seq);
DiffSet diff_set_vector(const VecSeq& seq);

// Histograms of pairwise sums are materialized before squaring; the guard
// bounds their entry count (= N^2) so a careless N cannot exhaust memory.
inline constexpr std::size_t kDefaultEnergyGuard = std::size_t{1} << 28;

// Number of ordered quadruples (n1,n2,n3,n4) with a_n1 + a_n2 = a_n3 + a_n4,
// computed as sum_s r(s)^2 over the sum histogram.  Never below 2N^2 - N.
std::int64_t additive_energy(const IntSeq& seq, std::size_t guard = kDefaultEnergyGuard);

// Joint version: quadruples where the sums agree simultaneously in every
// coordinate listed in dprime (1-based, non-empty, strictly increasing).
std::int64_t joint_additive_energy(const VecSeq& seq, std::span<const int> dprime,
                                   std::size_t guard = kDefaultEnergyGuard);

// Representation counts of nonzero differences restricted to a coordinate
// subset: key -> #{(n, m), n != m} realizing it.  Counts sum to N^2 - N and
// no key has a zero coordinate (components are strictly increasing).
struct RepFunction {
    std::vector<int> dprime;
    std::map<std::vector<std::int64_t>, std::int64_t> counts;

    std::int64_t total() const;
    std::int64_t l2_squared() const;  // sum of squared counts
};

RepFunction rep_function(const VecSeq& seq, std::span<const int> dprime);

// sum_{a,b} f(a) f(b) prod_i gcd(a_i, b_i) / sqrt(a_i b_i) over all ordered
// pairs of elements, with compensated summation.  Diagnostic only; the
// quadratic loop is intended for a few thousand elements.
double gcd_sum(std::span<const std::vector<std::int64_t>> elems, std::span<const double> weights);

}  // namespace minigap
