#include "minigap/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace minigap::bounds {

namespace {

// loglog N is positive and the powers below are monotone from here on.
constexpr std::int64_t kMinN = 16;

void need(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

double loglog(std::int64_t n) { return std::log(std::log(static_cast<double>(n))); }

}  // namespace

double cw_env_lower(std::int64_t n, std::int64_t card_vector, int d, double eps,
                    CwLowerVariant variant) {
    need(n >= kMinN, "cw_env_lower: need N >= 16");
    need(card_vector >= 1, "cw_env_lower: need a positive cardinality");
    need(d >= 2, "cw_env_lower: need d >= 2");
    need(eps > 0, "cw_env_lower: need eps > 0");
    double inv_d = 1.0 / d;
    double ll_exp = variant == CwLowerVariant::plus_eps ? inv_d + eps : inv_d + eps / d;
    double den = std::pow(static_cast<double>(card_vector), inv_d) *
                 std::pow(std::log(static_cast<double>(n)), inv_d) *
                 std::pow(loglog(n), ll_exp);
    return 1.0 / den;
}

double cw_env_upper(std::int64_t n, std::int64_t card_scalar, int d) {
    need(n >= kMinN, "cw_env_upper: need N >= 16");
    need(card_scalar >= 1, "cw_env_upper: need a positive cardinality");
    need(d >= 2, "cw_env_upper: need d >= 2");
    double prod = static_cast<double>(card_scalar) * std::log(static_cast<double>(n)) * loglog(n);
    return std::pow(prod, -1.0 / d);
}

double cw_tail_upper_scalar(std::int64_t n, std::int64_t card_scalar, int d, double delta) {
    need(n >= 3, "cw_tail_upper_scalar: need N >= 3");
    need(card_scalar >= 1, "cw_tail_upper_scalar: need a positive cardinality");
    need(d >= 2, "cw_tail_upper_scalar: need d >= 2");
    need(delta > 0, "cw_tail_upper_scalar: need delta > 0");
    return std::pow(std::log(static_cast<double>(n)), 1.0 + 1.0 / d + delta) /
           std::pow(static_cast<double>(card_scalar), 1.0 / d);
}

double cw_tail_upper_vector(std::int64_t n, int d, double delta) {
    need(n >= 2, "cw_tail_upper_vector: need N >= 2");
    need(d >= 2, "cw_tail_upper_vector: need d >= 2");
    need(delta >= 0, "cw_tail_upper_vector: need delta >= 0");
    return std::pow(static_cast<double>(n), delta) /
           std::pow(static_cast<double>(n), 2.0 / d);
}

double lf_env_lower(std::int64_t n, std::int64_t card_vector, double eps) {
    need(n >= kMinN, "lf_env_lower: need N >= 16");
    need(card_vector >= 1, "lf_env_lower: need a positive cardinality");
    need(eps > 0, "lf_env_lower: need eps > 0");
    double den = static_cast<double>(card_vector) * std::log(static_cast<double>(n)) *
                 std::pow(loglog(n), 1.0 + eps);
    return 1.0 / den;
}

double lf_env_upper_im(std::int64_t n, std::int64_t card_vector,
                       std::span<const std::int64_t> last_terms) {
    need(n >= kMinN, "lf_env_upper_im: need N >= 16");
    need(card_vector >= 1, "lf_env_upper_im: need a positive cardinality");
    need(last_terms.size() >= 2, "lf_env_upper_im: need d >= 2 component values");
    double log_gm = 0.0;
    for (std::int64_t a : last_terms) {
        need(a >= 3, "lf_env_upper_im: need component values >= 3");
        log_gm += std::log(static_cast<double>(a));
    }
    log_gm /= static_cast<double>(last_terms.size());
    // loglog of the geometric mean of the component values.
    double num = std::log(log_gm);
    double den = static_cast<double>(card_vector) * std::log(static_cast<double>(n)) * loglog(n);
    return num / den;
}

double lf_env_upper_clean(std::int64_t card_vector) {
    need(card_vector >= 1, "lf_env_upper_clean: need a positive cardinality");
    return 1.0 / static_cast<double>(card_vector);
}

double lf_tail_upper(std::int64_t n, double delta) {
    need(n >= 2, "lf_tail_upper: need N >= 2");
    need(delta >= 0, "lf_tail_upper: need delta >= 0");
    return std::pow(static_cast<double>(n), delta) /
           (static_cast<double>(n) * static_cast<double>(n));
}

VdcBounds eval_vdc(std::int64_t base, std::int64_t n) {
    need(base >= 2, "eval_vdc: need base >= 2");
    need(n >= 2, "eval_vdc: need N >= 2");
    need(static_cast<__int128>(base) * n <= std::numeric_limits<std::int64_t>::max(),
         "eval_vdc: base * N overflows");
    VdcBounds b;
    b.lower = Rational::frac(1, base * n);
    b.upper = base == 2 ? Rational::frac(1, n) : Rational::frac(base, n);
    return b;
}

}  // namespace minigap::bounds
