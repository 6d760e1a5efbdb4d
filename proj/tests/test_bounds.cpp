#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "minigap/bounds.hpp"
#include "minigap/rational.hpp"

using namespace minigap;
using namespace minigap::bounds;

namespace {
constexpr double kTol = 1e-9;
double ln(double x) { return std::log(x); }
double lln(double x) { return std::log(std::log(x)); }
}  // namespace

TEST_CASE("envelope pair for componentwise models") {
    CHECK(cw_env_lower(100, 1000, 2, 0.5) ==
          doctest::Approx(0.0096491050886858502).epsilon(kTol));
    CHECK(cw_env_lower(100, 1000, 2, 0.5, CwLowerVariant::plus_eps_over_d) ==
          doctest::Approx(0.010726537779523215).epsilon(kTol));
    CHECK(cw_env_upper(100, 1000, 2) ==
          doctest::Approx(0.011924278125072123).epsilon(kTol));

    // formula shape, re-derived inline for a different parameter point
    std::int64_t n = 5000, card = 123456;
    int d = 3;
    double eps = 0.25;
    CHECK(cw_env_lower(n, card, d, eps) ==
          doctest::Approx(1.0 / (std::pow(card, 1.0 / d) * std::pow(ln(n), 1.0 / d) *
                                 std::pow(lln(n), 1.0 / d + eps)))
              .epsilon(kTol));
    CHECK(cw_env_lower(n, card, d, eps, CwLowerVariant::plus_eps_over_d) ==
          doctest::Approx(1.0 / (std::pow(card, 1.0 / d) * std::pow(ln(n), 1.0 / d) *
                                 std::pow(lln(n), (1.0 + eps) / d)))
              .epsilon(kTol));
    CHECK(cw_env_upper(n, card, d) ==
          doctest::Approx(std::pow(card * ln(n) * lln(n), -1.0 / d)).epsilon(kTol));

    // the envelope orders correctly once slack is small
    CHECK(cw_env_lower(100, 1000, 2, 0.5) < cw_env_upper(100, 1000, 2));

    // larger eps means a smaller lower envelope
    CHECK(cw_env_lower(100, 1000, 2, 0.9) < cw_env_lower(100, 1000, 2, 0.5));

    CHECK_THROWS_AS(cw_env_lower(15, 1000, 2, 0.5), std::domain_error);
    CHECK_THROWS_AS(cw_env_lower(100, 0, 2, 0.5), std::domain_error);
    CHECK_THROWS_AS(cw_env_lower(100, 1000, 1, 0.5), std::domain_error);
    CHECK_THROWS_AS(cw_env_lower(100, 1000, 2, 0.0), std::domain_error);
    CHECK_THROWS_AS(cw_env_upper(15, 1000, 2), std::domain_error);
    CHECK_NOTHROW(cw_env_lower(16, 1000, 2, 0.5));
}

TEST_CASE("tail upper bounds for componentwise models") {
    CHECK(cw_tail_upper_scalar(100, 1000, 2, 0.1) ==
          doctest::Approx(0.36407687514219422).epsilon(kTol));
    CHECK(cw_tail_upper_vector(100, 2, 0.1) ==
          doctest::Approx(0.015848931924611134).epsilon(kTol));

    std::int64_t n = 40000;
    CHECK(cw_tail_upper_scalar(n, 777, 3, 0.2) ==
          doctest::Approx(std::pow(ln(n), 1.0 + 1.0 / 3 + 0.2) / std::pow(777, 1.0 / 3))
              .epsilon(kTol));
    CHECK(cw_tail_upper_vector(n, 3, 0.05) ==
          doctest::Approx(std::pow(n, 0.05) / std::pow(n, 2.0 / 3)).epsilon(kTol));

    // delta = 0 collapses the vector tail to exactly N^{-2/d}
    CHECK(cw_tail_upper_vector(100, 2, 0.0) == doctest::Approx(0.01).epsilon(1e-15));

    // shrinking delta tightens both tails
    CHECK(cw_tail_upper_scalar(100, 1000, 2, 0.05) < cw_tail_upper_scalar(100, 1000, 2, 0.1));
    CHECK(cw_tail_upper_vector(100, 2, 0.05) < cw_tail_upper_vector(100, 2, 0.1));

    CHECK_THROWS_AS(cw_tail_upper_scalar(2, 1000, 2, 0.1), std::domain_error);
    CHECK_NOTHROW(cw_tail_upper_scalar(3, 1000, 2, 0.1));
    CHECK_THROWS_AS(cw_tail_upper_scalar(100, 1000, 2, 0.0), std::domain_error);
    CHECK_THROWS_AS(cw_tail_upper_vector(1, 2, 0.1), std::domain_error);
    CHECK_THROWS_AS(cw_tail_upper_vector(100, 2, -0.1), std::domain_error);
}

TEST_CASE("envelope and tail for the linear form model") {
    CHECK(lf_env_lower(100, 4851, 0.5) ==
          doctest::Approx(2.3718534886732382e-05).epsilon(kTol));
    std::vector<std::int64_t> last{100, 10000};
    CHECK(lf_env_upper_im(100, 4950, last) ==
          doctest::Approx(5.5515086767494434e-05).epsilon(kTol));
    CHECK(lf_env_upper_clean(190) == doctest::Approx(1.0 / 190).epsilon(1e-15));

    CHECK(lf_tail_upper(100, 0.1) ==
          doctest::Approx(0.00015848931924611136).epsilon(kTol));
    CHECK(lf_tail_upper(1000, 0.1) ==
          doctest::Approx(1.9952623149688796e-06).epsilon(kTol));
    CHECK(lf_tail_upper(100, 0.0) == doctest::Approx(1e-4).epsilon(1e-15));
    CHECK(lf_tail_upper(7, 0.0) == doctest::Approx(1.0 / 49).epsilon(1e-15));

    std::int64_t n = 2000, card = 31337;
    double eps = 0.75;
    CHECK(lf_env_lower(n, card, eps) ==
          doctest::Approx(1.0 / (card * ln(n) * std::pow(lln(n), 1.0 + eps))).epsilon(kTol));

    // the geometric mean of the last terms drives the numerator
    std::vector<std::int64_t> big{1000000, 1000000};
    std::vector<std::int64_t> small{10, 10};
    CHECK(lf_env_upper_im(100, 4950, big) > lf_env_upper_im(100, 4950, small));
    CHECK(lf_env_upper_im(100, 4950, big) ==
          doctest::Approx(lln(1e6) / (4950 * ln(100.0) * lln(100.0))).epsilon(kTol));

    // all components at 3 keeps the loglog factor defined (log log 3 > 0)
    std::vector<std::int64_t> three{3, 3};
    CHECK(lf_env_upper_im(100, 4950, three) > 0);
    std::vector<std::int64_t> two{2, 3};
    CHECK_THROWS_AS(lf_env_upper_im(100, 4950, two), std::domain_error);
    std::vector<std::int64_t> none;
    CHECK_THROWS_AS(lf_env_upper_im(100, 4950, none), std::domain_error);

    CHECK_THROWS_AS(lf_env_lower(15, 4851, 0.5), std::domain_error);
    CHECK_THROWS_AS(lf_env_lower(100, 4851, 0.0), std::domain_error);
    CHECK_THROWS_AS(lf_env_upper_clean(0), std::domain_error);
    CHECK_THROWS_AS(lf_tail_upper(1, 0.1), std::domain_error);
    CHECK_THROWS_AS(lf_tail_upper(100, -0.01), std::domain_error);
}

TEST_CASE("bounds decrease along the sampling grid") {
    std::vector<std::int64_t> grid{16, 32, 100, 500, 2000, 10000};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(cw_env_lower(grid[i], 1000, 2, 0.5) < cw_env_lower(grid[i - 1], 1000, 2, 0.5));
        CHECK(cw_env_upper(grid[i], 1000, 2) < cw_env_upper(grid[i - 1], 1000, 2));
        CHECK(lf_env_lower(grid[i], 4851, 0.5) < lf_env_lower(grid[i - 1], 4851, 0.5));
        CHECK(lf_tail_upper(grid[i], 0.1) < lf_tail_upper(grid[i - 1], 0.1));
        CHECK(cw_tail_upper_vector(grid[i], 2, 0.1) < cw_tail_upper_vector(grid[i - 1], 2, 0.1));
    }
}

TEST_CASE("radical inverse envelope is exact rational arithmetic") {
    VdcBounds b3 = eval_vdc(3, 100);
    CHECK(b3.lower == Rational::make(1, 300));
    CHECK(b3.upper == Rational::make(3, 100));

    VdcBounds b2 = eval_vdc(2, 100);
    CHECK(b2.lower == Rational::make(1, 200));
    CHECK(b2.upper == Rational::make(1, 100));

    // b / N may exceed 1 for tiny N; it must survive as an exact fraction
    VdcBounds b10 = eval_vdc(10, 3);
    CHECK(b10.lower == Rational::make(1, 30));
    CHECK(b10.upper.num == 10);
    CHECK(b10.upper.den == 3);

    for (std::int64_t base : {2, 3, 5, 10}) {
        for (std::int64_t n : {2, 17, 1000}) {
            VdcBounds b = eval_vdc(base, n);
            CHECK(b.lower.num * base * n == b.lower.den);  // exactly 1/(bN)
            CHECK(b.lower <= b.upper);
        }
    }

    CHECK_THROWS_AS(eval_vdc(1, 100), std::domain_error);
    CHECK_THROWS_AS(eval_vdc(2, 1), std::domain_error);
    CHECK_THROWS_AS(eval_vdc(2, 0), std::domain_error);
}
