#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "minigap/rational.hpp"

namespace minigap {

// Strictly increasing positive integers a_1 < a_2 < ... with every value
// below 2^63 so products against circle points stay exact.
struct IntSeq {
    std::vector<std::int64_t> values;
    std::string family_tag;

    std::size_t length() const { return values.size(); }
    void validate() const;  // throws std::invalid_argument / std::out_of_range
};

// d >= 2 component sequences of equal length; component i supplies the i-th
// coordinate of the vector terms.
struct VecSeq {
    std::vector<IntSeq> components;

    int dim() const { return static_cast<int>(components.size()); }
    std::size_t length() const { return components.empty() ? 0 : components[0].length(); }
    void validate() const;
};

// Family grammar accepted on the command line and in config files:
//   identity | poly:k=<int> | lacunary:base=<int> | file:<path>
// plus an explicit in-memory list for direct API use.
struct FamilySpec {
    enum class Kind { identity, poly, lacunary, file, list };

    Kind kind = Kind::identity;
    std::int64_t param = 0;            // k for poly, base for lacunary
    std::string path;                  // file
    std::vector<std::int64_t> values;  // explicit list

    static FamilySpec parse(const std::string& text);
    static FamilySpec explicit_list(std::vector<std::int64_t> values);
    std::string tag() const;  // canonical text form, round-trips through parse
};

// First n terms of the family.  Overflow past 2^63 is rejected with an error
// naming the offending index.
IntSeq gen_scalar(const FamilySpec& family, std::int64_t n);

// One family per component; requires d >= 2.
VecSeq gen_vector(std::span<const FamilySpec> families, std::int64_t n);

// Radical inverse of n in base b: digits of n reversed behind the point,
// returned as an exact reduced fraction.
Rational vdc_point(std::int64_t base, std::int64_t n);

// d radical inverses in pairwise coprime bases.
std::vector<Rational> halton_point(std::span<const std::int64_t> bases, std::int64_t n);

// Whitespace-separated columns, one term per line, '#' starts a comment.
// One column loads an IntSeq, d >= 2 columns load a VecSeq.  All structural
// and range errors carry the offending line number.
std::variant<IntSeq, VecSeq> load_sequence_file(const std::string& path);

}  // namespace minigap
