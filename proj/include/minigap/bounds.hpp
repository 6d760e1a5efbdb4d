#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "minigap/rational.hpp"

namespace minigap::bounds {

// Reference curves for the minimal gap, evaluated in double precision with
// natural logarithms; loglog denotes log(log(N)), positive from N = 16 on.
// Tags name the sequence model and the flavour of the statement:
//   cw_env  - componentwise / scalar-times-vector models, envelope pair
//             (almost-sure lower bound plus infinitely-often upper bound)
//   cw_tail - same models, upper bounds valid for all large N
//   lf_env  - linear-form model, envelope (lower + two infinitely-often uppers)
//   lf_tail - linear-form model, upper bound for all large N
//   vdc     - radical-inverse model, exact rational envelope
// card_scalar / card_vector are the positive difference-set cardinalities of
// the scalar and the vector sequence at N.

// The lower envelope exponent on loglog comes in two conventions that differ
// in whether the slack eps is divided by the dimension.
enum class CwLowerVariant { plus_eps, plus_eps_over_d };

double cw_env_lower(std::int64_t n, std::int64_t card_vector, int d, double eps,
                    CwLowerVariant variant = CwLowerVariant::plus_eps);
double cw_env_upper(std::int64_t n, std::int64_t card_scalar, int d);

double cw_tail_upper_scalar(std::int64_t n, std::int64_t card_scalar, int d, double delta);
double cw_tail_upper_vector(std::int64_t n, int d, double delta);

double lf_env_lower(std::int64_t n, std::int64_t card_vector, double eps);
// last_terms are the component values a_N^(1..d); their geometric mean feeds
// the loglog factor in the numerator.
double lf_env_upper_im(std::int64_t n, std::int64_t card_vector,
                       std::span<const std::int64_t> last_terms);
double lf_env_upper_clean(std::int64_t card_vector);

double lf_tail_upper(std::int64_t n, double delta);

struct VdcBounds {
    Rational lower;  // 1 / (b N)
    Rational upper;  // b / N for b >= 3, 1 / N for b = 2
};
VdcBounds eval_vdc(std::int64_t base, std::int64_t n);

// A sampled bound curve ready for serialization.
struct BoundCurve {
    std::string tag;   // e.g. "lf_env"
    std::string side;  // e.g. "lower", "upper_clean"
    std::vector<std::pair<std::string, double>> params;
    std::vector<std::pair<std::int64_t, double>> samples;  // (N, value)
};

}  // namespace minigap::bounds
