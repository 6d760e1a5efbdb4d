#include "minigap/seq.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace minigap {

namespace {

constexpr bool value_ok(std::int64_t v) {
    return v >= 1 && static_cast<std::uint64_t>(v) < (std::uint64_t{1} << 63);
}

std::int64_t checked_pow(std::int64_t base, std::int64_t exp, const std::string& fam,
                         std::int64_t index) {
    __int128 acc = 1;
    for (std::int64_t i = 0; i < exp; ++i) {
        acc *= base;
        if (acc >= (static_cast<__int128>(1) << 63))
            throw std::out_of_range("family " + fam + " overflows the 63-bit value limit at index " +
                                    std::to_string(index));
    }
    return static_cast<std::int64_t>(acc);
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("family spec: bad integer for " + what + ": '" + text + "'");
    return value;
}

}  // namespace

void IntSeq::validate() const {
    if (values.empty()) throw std::invalid_argument("sequence must be non-empty");
    std::int64_t prev = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!value_ok(values[i]))
            throw std::out_of_range("sequence value out of [1, 2^63) at index " +
                                    std::to_string(i + 1));
        if (values[i] <= prev)
            throw std::invalid_argument("sequence not strictly increasing at index " +
                                        std::to_string(i + 1));
        prev = values[i];
    }
}

void VecSeq::validate() const {
    if (components.size() < 2)
        throw std::invalid_argument("vector sequence needs d >= 2 components");
    std::size_t len = components[0].length();
    for (const auto& c : components) {
        if (c.length() != len)
            throw std::invalid_argument("vector sequence components differ in length");
        c.validate();
    }
}

FamilySpec FamilySpec::parse(const std::string& text) {
    FamilySpec spec;
    if (text == "identity") {
        spec.kind = Kind::identity;
        return spec;
    }
    if (text.rfind("poly:k=", 0) == 0) {
        spec.kind = Kind::poly;
        spec.param = parse_int(text.substr(7), "poly k");
        if (spec.param < 1) throw std::invalid_argument("family spec: poly needs k >= 1");
        return spec;
    }
    if (text.rfind("lacunary:base=", 0) == 0) {
        spec.kind = Kind::lacunary;
        spec.param = parse_int(text.substr(14), "lacunary base");
        if (spec.param < 2) throw std::invalid_argument("family spec: lacunary needs base >= 2");
        return spec;
    }
    if (text.rfind("file:", 0) == 0) {
        spec.kind = Kind::file;
        spec.path = text.substr(5);
        if (spec.path.empty()) throw std::invalid_argument("family spec: file needs a path");
        return spec;
    }
    throw std::invalid_argument("unrecognized family spec '" + text +
                                "' (expected identity | poly:k=<int> | lacunary:base=<int> | "
                                "file:<path>)");
}

FamilySpec FamilySpec::explicit_list(std::vector<std::int64_t> values) {
    FamilySpec spec;
    spec.kind = Kind::list;
    spec.values = std::move(values);
    return spec;
}

std::string FamilySpec::tag() const {
    switch (kind) {
        case Kind::identity: return "identity";
        case Kind::poly: return "poly:k=" + std::to_string(param);
        case Kind::lacunary: return "lacunary:base=" + std::to_string(param);
        case Kind::file: return "file:" + path;
        case Kind::list: return "list[" + std::to_string(values.size()) + "]";
    }
    return "?";
}

IntSeq gen_scalar(const FamilySpec& family, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("gen_scalar: need n >= 1");
    IntSeq seq;
    seq.family_tag = family.tag();
    seq.values.reserve(static_cast<std::size_t>(n));
    switch (family.kind) {
        case FamilySpec::Kind::identity:
            for (std::int64_t i = 1; i <= n; ++i) seq.values.push_back(i);
            break;
        case FamilySpec::Kind::poly:
            for (std::int64_t i = 1; i <= n; ++i)
                seq.values.push_back(checked_pow(i, family.param, seq.family_tag, i));
            break;
        case FamilySpec::Kind::lacunary:
            for (std::int64_t i = 1; i <= n; ++i)
                seq.values.push_back(checked_pow(family.param, i, seq.family_tag, i));
            break;
        case FamilySpec::Kind::file: {
            auto loaded = load_sequence_file(family.path);
            if (!std::holds_alternative<IntSeq>(loaded))
                throw std::invalid_argument("gen_scalar: file '" + family.path +
                                            "' holds a multi-column sequence");
            auto& file_seq = std::get<IntSeq>(loaded);
            if (file_seq.length() < static_cast<std::size_t>(n))
                throw std::invalid_argument("gen_scalar: file '" + family.path + "' provides " +
                                            std::to_string(file_seq.length()) + " terms, need " +
                                            std::to_string(n));
            seq.values.assign(file_seq.values.begin(), file_seq.values.begin() + n);
            break;
        }
        case FamilySpec::Kind::list:
            if (family.values.size() < static_cast<std::size_t>(n))
                throw std::invalid_argument("gen_scalar: explicit list provides " +
                                            std::to_string(family.values.size()) +
                                            " terms, need " + std::to_string(n));
            seq.values.assign(family.values.begin(), family.values.begin() + n);
            break;
    }
    seq.validate();
    return seq;
}

VecSeq gen_vector(std::span<const FamilySpec> families, std::int64_t n) {
    if (families.size() < 2) throw std::invalid_argument("gen_vector: need d >= 2 families");
    VecSeq seq;
    seq.components.reserve(families.size());
    for (const auto& f : families) seq.components.push_back(gen_scalar(f, n));
    seq.validate();
    return seq;
}

Rational vdc_point(std::int64_t base, std::int64_t n) {
    if (base < 2) throw std::invalid_argument("vdc_point: base must be >= 2");
    if (n < 1) throw std::invalid_argument("vdc_point: index must be >= 1");
    // Reverse the base-b digits of n: num accumulates them high-to-low while
    // den tracks b^(digit count).
    __int128 num = 0;
    __int128 den = 1;
    std::int64_t x = n;
    while (x > 0) {
        num = num * base + x % base;
        den *= base;
        x /= base;
        if (den > std::numeric_limits<std::int64_t>::max())
            throw std::out_of_range("vdc_point: index " + std::to_string(n) +
                                    " needs a denominator beyond the exact range");
    }
    return Rational::make(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

std::vector<Rational> halton_point(std::span<const std::int64_t> bases, std::int64_t n) {
    if (bases.size() < 2) throw std::invalid_argument("halton_point: need d >= 2 bases");
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (std::size_t j = i + 1; j < bases.size(); ++j)
            if (std::gcd(bases[i], bases[j]) != 1)
                throw std::invalid_argument("halton_point: bases " + std::to_string(bases[i]) +
                                            " and " + std::to_string(bases[j]) +
                                            " are not coprime");
    std::vector<Rational> point;
    point.reserve(bases.size());
    for (std::int64_t b : bases) point.push_back(vdc_point(b, n));
    return point;
}

std::variant<IntSeq, VecSeq> load_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sequence file '" + path + "'");

    std::vector<std::vector<std::int64_t>> columns;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::int64_t> row;
        std::string tok;
        while (fields >> tok) {
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size())
                fail("not an integer: '" + tok + "'");
            if (!value_ok(v)) fail("value out of [1, 2^63)");
            row.push_back(v);
        }
        if (row.empty()) continue;
        if (columns.empty()) {
            columns.resize(row.size());
        } else if (row.size() != columns.size()) {
            fail("expected " + std::to_string(columns.size()) + " columns, got " +
                 std::to_string(row.size()));
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!columns[c].empty() && row[c] <= columns[c].back())
                fail("column " + std::to_string(c + 1) + " not strictly increasing");
            columns[c].push_back(row[c]);
        }
    }
    if (columns.empty() || columns[0].empty())
        throw std::runtime_error(path + ": no data lines");

    if (columns.size() == 1) {
        IntSeq seq;
        seq.values = std::move(columns[0]);
        seq.family_tag = "file:" + path;
        seq.validate();
        return seq;
    }
    VecSeq seq;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        IntSeq comp;
        comp.values = std::move(columns[c]);
        comp.family_tag = "file:" + path + "#" + std::to_string(c + 1);
        seq.components.push_back(std::move(comp));
    }
    seq.validate();
    return seq;
}

}  // namespace minigap
