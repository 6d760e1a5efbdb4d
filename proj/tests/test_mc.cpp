#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "minigap/mc.hpp"
#include "minigap/report_io.hpp"

using namespace minigap;
using namespace minigap::mc;

namespace {

using u64 = std::uint64_t;
constexpr u64 kHalf = u64{1} << 63;
constexpr u64 kQuarter = u64{1} << 62;

ExperimentConfig base_cfg(Mode mode, int d, std::vector<std::string> fams,
                          std::vector<std::int64_t> grid) {
    ExperimentConfig c;
    c.mode = mode;
    c.d = d;
    for (const auto& f : fams) c.families.push_back(FamilySpec::parse(f));
    c.n_grid = std::move(grid);
    c.seed = 7;
    c.seed_set = true;
    return c;
}

// pairwise scan over materialized points, kept separate from the library's
// own engines
GapResult oracle_gap(const ExperimentConfig& cfg, std::span<const Fraction64> alpha,
                     std::int64_t n) {
    Sequences s = materialize(cfg, n);
    std::vector<std::vector<Fraction64>> pts;
    for (std::int64_t i = 0; i < n; ++i) {
        std::vector<Fraction64> p;
        if (cfg.mode == Mode::linear_form) {
            std::vector<std::int64_t> row;
            for (const auto& c : s.comps) row.push_back(c.values[static_cast<std::size_t>(i)]);
            p.push_back(linear_form_frac(row, alpha));
        } else {
            for (std::size_t c = 0; c < s.comps.size(); ++c)
                p.push_back(frac_mul(s.comps[c].values[static_cast<std::size_t>(i)],
                                     {alpha[c].u}));
        }
        pts.push_back(std::move(p));
    }
    GapResult best;
    best.value = Fraction64{~u64{0}};
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Fraction64 dist = nid_sup<Fraction64>(pts[i], pts[j]);
            if (dist < best.value) {
                best.value = dist;
                best.first = static_cast<std::uint32_t>(i);
                best.second = static_cast<std::uint32_t>(j);
            }
        }
    return best;
}

}  // namespace

TEST_CASE("mode names round trip") {
    for (Mode m : {Mode::componentwise, Mode::scalar_vector, Mode::linear_form, Mode::vdc,
                   Mode::halton})
        CHECK(mode_from_string(to_string(m)) == m);
    CHECK(to_string(Mode::scalar_vector) == "scalar_vector");
    CHECK_THROWS_AS(mode_from_string("diagonal"), std::invalid_argument);
}

TEST_CASE("alpha sampling is a pure function of seed, trial, coordinate") {
    auto a = sample_alpha(3, 99, 5);
    auto b = sample_alpha(3, 99, 5);
    REQUIRE(a.size() == 3);
    CHECK(a == b);
    CHECK(sample_alpha(3, 99, 6) != a);
    CHECK(sample_alpha(3, 100, 5) != a);

    // no collisions across 10^4 trials x 2 coordinates
    std::set<u64> seen;
    for (u64 t = 0; t < 10000; ++t)
        for (Fraction64 f : sample_alpha(2, 424242, t)) seen.insert(f.u);
    CHECK(seen.size() == 20000);

    // equidistribution smoke: mean of 10^5 draws is 0.5 within 0.005
    double sum = 0;
    for (u64 t = 0; t < 100000; ++t) sum += sample_alpha(1, 31415, t)[0].to_double();
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sum / 100000 - 0.5) < 0.005);
}

TEST_CASE("config validation separates desk use from bound scoring") {
    auto ok = base_cfg(Mode::linear_form, 2, {"identity", "poly:k=2"}, {16, 32});
    CHECK_NOTHROW(ok.validate(false));
    CHECK_NOTHROW(ok.validate(true));

    auto d1 = base_cfg(Mode::linear_form, 1, {"identity"}, {4, 8});
    CHECK_NOTHROW(d1.validate(false));
    CHECK_THROWS_AS(d1.validate(true), std::invalid_argument);

    auto small_grid = base_cfg(Mode::linear_form, 2, {"identity", "poly:k=2"}, {8, 32});
    CHECK_NOTHROW(small_grid.validate(false));
    CHECK_THROWS_AS(small_grid.validate(true), std::invalid_argument);

    auto cw1 = base_cfg(Mode::componentwise, 1, {"identity"}, {16});
    CHECK_THROWS_AS(cw1.validate(false), std::invalid_argument);

    auto bad = ok;
    bad.n_grid = {32, 32};
    CHECK_THROWS_AS(bad.validate(false), std::invalid_argument);
    bad = ok;
    bad.n_grid.clear();
    CHECK_THROWS_AS(bad.validate(false), std::invalid_argument);
    bad = ok;
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(false), std::invalid_argument);
    bad = ok;
    bad.eps = 0;
    CHECK_THROWS_AS(bad.validate(false), std::invalid_argument);
    bad = ok;
    bad.delta = -0.5;
    CHECK_THROWS_AS(bad.validate(false), std::invalid_argument);
    bad = ok;
    bad.count_n = 32;
    CHECK_THROWS_AS(bad.validate(false), std::invalid_argument);  // count_m missing
    bad.count_m = 4;
    CHECK_NOTHROW(bad.validate(false));
    bad.count_n = 64;
    CHECK_THROWS_AS(bad.validate(false), std::invalid_argument);  // beyond the grid

    auto sv = base_cfg(Mode::scalar_vector, 2, {"identity", "poly:k=2"}, {16});
    CHECK_THROWS_AS(sv.validate(false), std::invalid_argument);
    auto three = base_cfg(Mode::componentwise, 3, {"identity", "poly:k=2"}, {16});
    CHECK_THROWS_AS(three.validate(false), std::invalid_argument);

    ExperimentConfig v;
    v.mode = Mode::vdc;
    v.bases = {2, 3};
    v.n_max = 100;
    CHECK_THROWS_AS(v.validate(false), std::invalid_argument);
    v.bases = {3};
    CHECK_NOTHROW(v.validate(false));
    v.n_max = 1;
    CHECK_THROWS_AS(v.validate(false), std::invalid_argument);

    ExperimentConfig h;
    h.mode = Mode::halton;
    h.bases = {2};
    h.n_max = 50;
    CHECK_THROWS_AS(h.validate(false), std::invalid_argument);
    h.bases = {2, 4};
    CHECK_THROWS_AS(h.validate(false), std::invalid_argument);
    h.bases = {2, 3};
    CHECK_NOTHROW(h.validate(false));
}

TEST_CASE("materialization replicates families by mode") {
    auto sv = base_cfg(Mode::scalar_vector, 3, {"poly:k=2"}, {16});
    Sequences s = materialize(sv, 10);
    REQUIRE(s.comps.size() == 3);
    CHECK(s.has_scalar);
    CHECK(s.scalar.values.size() == 10);
    CHECK(s.scalar.values[3] == 16);
    for (const auto& c : s.comps) CHECK(c.values == s.scalar.values);

    auto cw = base_cfg(Mode::componentwise, 2, {"identity", "lacunary:base=2"}, {16});
    Sequences t = materialize(cw, 6);
    REQUIRE(t.comps.size() == 2);
    CHECK(t.comps[0].values == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6});
    CHECK(t.comps[1].values == std::vector<std::int64_t>{2, 4, 8, 16, 32, 64});

    auto rep = base_cfg(Mode::componentwise, 3, {"identity"}, {16});
    Sequences r = materialize(rep, 5);
    REQUIRE(r.comps.size() == 3);
    for (const auto& c : r.comps) CHECK(c.values == std::vector<std::int64_t>{1, 2, 3, 4, 5});

    auto lf1 = base_cfg(Mode::linear_form, 1, {"identity"}, {8});
    Sequences one = materialize(lf1, 4);
    CHECK(one.comps.size() == 1);
    CHECK(one.has_scalar);
}

TEST_CASE("gap curves: degenerate alphas and tiny exact cases") {
    auto cfg = base_cfg(Mode::linear_form, 1, {"identity"}, {2, 3});
    std::vector<Fraction64> half{{kHalf}};
    auto curve = gap_curve(cfg, half);
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].n == 2);
    CHECK(curve[0].gap.value.u == kHalf);  // {1/2, 0}
    CHECK(curve[1].gap.value.u == 0);      // {1/2, 0, 1/2} repeats
    CHECK(curve[1].gap.first == 0);
    CHECK(curve[1].gap.second == 2);

    auto cw = base_cfg(Mode::componentwise, 2, {"identity", "poly:k=2"}, {2});
    std::vector<Fraction64> al{{kQuarter}, {kHalf}};
    auto c2 = gap_curve(cw, al);
    REQUIRE(c2.size() == 1);
    // points (1/4, 1/2), (1/2, 0): sup(1/4, 1/2) = 1/2
    CHECK(c2[0].gap.value.u == kHalf);
}

TEST_CASE("gap curves match the pairwise oracle in every mode") {
    std::mt19937_64 rng(515);
    struct Case {
        Mode mode;
        int d;
        std::vector<std::string> fams;
        std::vector<std::int64_t> grid;
    };
    std::vector<std::int64_t> full{2, 5, 17, 40, 64};
    std::vector<std::int64_t> lac{2, 5, 17, 40, 62};  // 2^63 would overflow
    std::vector<Case> cases{
        {Mode::componentwise, 2, {"identity", "poly:k=2"}, full},
        {Mode::componentwise, 3, {"identity", "poly:k=2", "poly:k=3"}, full},
        {Mode::scalar_vector, 2, {"lacunary:base=2"}, lac},
        {Mode::linear_form, 2, {"identity", "poly:k=2"}, full},
        {Mode::linear_form, 1, {"poly:k=3"}, full},
    };
    for (const auto& cs : cases) {
        auto cfg = base_cfg(cs.mode, cs.d, cs.fams, cs.grid);
        for (int rep = 0; rep < 6; ++rep) {
            std::vector<Fraction64> alpha;
            for (int i = 0; i < cs.d; ++i) alpha.push_back({rng()});
            auto curve = gap_curve(cfg, alpha);
            REQUIRE(curve.size() == cfg.n_grid.size());
            Fraction64 prev{~u64{0}};
            for (std::size_t k = 0; k < curve.size(); ++k) {
                GapResult want = oracle_gap(cfg, alpha, cfg.n_grid[k]);
                CHECK(curve[k].gap.value == want.value);
                CHECK(curve[k].gap.first == want.first);
                CHECK(curve[k].gap.second == want.second);
                CHECK(curve[k].gap.value.u <= prev.u);  // never grows with N
                prev = curve[k].gap.value;
            }
        }
    }
}

TEST_CASE("continued fraction oracle finds the best multiplier") {
    CHECK(cf_min_oracle({kQuarter}, 3).value.u == kQuarter);
    CHECK(cf_min_oracle({kQuarter}, 3).z == 1);
    CHECK(cf_min_oracle({kQuarter}, 4).value.u == 0);
    CHECK(cf_min_oracle({kQuarter}, 4).z == 4);

    std::mt19937_64 rng(616);
    for (int rep = 0; rep < 300; ++rep) {
        Fraction64 alpha{rng()};
        std::int64_t z_max = 1 + static_cast<std::int64_t>(rng() % 300);
        CfMin got = cf_min_oracle(alpha, z_max);
        Fraction64 best{~u64{0}};
        std::int64_t best_z = 0;
        for (std::int64_t z = 1; z <= z_max; ++z) {
            Fraction64 d = circle_dist(frac_mul(z, alpha), Fraction64{0});
            if (d < best) {
                best = d;
                best_z = z;
            }
        }
        CHECK(got.value == best);
        CHECK(got.z == best_z);
        CHECK(got.z >= 1);
        CHECK(got.z <= z_max);
        CHECK(circle_dist(frac_mul(got.z, alpha), Fraction64{0}) == got.value);
    }
}

TEST_CASE("identity gaps coincide with the continued fraction of alpha") {
    std::mt19937_64 rng(717);
    auto cfg = base_cfg(Mode::linear_form, 1, {"identity"}, {2, 3, 10, 47, 128, 300});
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Fraction64> alpha{{rng()}};
        auto curve = gap_curve(cfg, alpha);
        for (std::size_t k = 0; k < curve.size(); ++k) {
            CfMin cf = cf_min_oracle(alpha[0], cfg.n_grid[k] - 1);
            CHECK(curve[k].gap.value == cf.value);
        }
    }
}

TEST_CASE("window counts: exact small instances and the pair identity") {
    // scalar route, alpha = 1/2, diffs {1, 2}: only z = 2 lands at 0
    IntSeq seq{{1, 2, 3}, "explicit"};
    DiffSet ds = diff_set_scalar(seq);
    std::vector<Fraction64> half{{kHalf}};
    CHECK(count_window_scalar(2, half, ds, Mode::linear_form) == 1);
    CHECK(count_window_scalar(1, half, ds, Mode::linear_form) ==
          static_cast<std::int64_t>(ds.cardinality()));  // window is everything

    VecSeq vs;
    vs.components.push_back(seq);
    vs.components.push_back(IntSeq{{1, 4, 9}, "explicit"});
    std::vector<Fraction64> hh{{kHalf}, {kHalf}};
    // alpha = (1/2, 1/2) sends every (a_n + b_n) to an even sum: all points 0
    CHECK(count_window_pairs(3, 1, hh, vs, Mode::linear_form) == 6);  // N^2 - N
    CHECK(count_window_pairs(3, 1000, hh, vs, Mode::linear_form) == 6);
    // alpha = (1/2, 1/4): points are 3/4 and 0, a single pair at distance 1/4
    VecSeq vq;
    vq.components.push_back(IntSeq{{1, 2}, "explicit"});
    vq.components.push_back(IntSeq{{1, 4}, "explicit"});
    std::vector<Fraction64> hq{{kHalf}, {kQuarter}};
    CHECK(count_window_pairs(2, 2, hq, vq, Mode::linear_form) == 2);  // closed window
    CHECK(count_window_pairs(2, 3, hq, vq, Mode::linear_form) == 0);

    // a huge M shrinks the window past every nonzero distance
    IntSeq two{{1, 2}, "explicit"};
    DiffSet ds1 = diff_set_scalar(two);
    CHECK(count_window_scalar(std::int64_t{1} << 40, half, ds1, Mode::linear_form) == 0);
}

TEST_CASE("pair counts equal representation counts weighted by the window") {
    std::mt19937_64 rng(818);
    for (const auto& mode : {Mode::componentwise, Mode::linear_form}) {
        auto cfg = base_cfg(mode, 2, {"identity", "poly:k=2"}, {24});
        Sequences s = materialize(cfg, 24);
        VecSeq vec = s.as_vecseq();
        std::vector<int> dboth{1, 2};
        RepFunction rf = rep_function(vec, dboth);
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<Fraction64> alpha{{rng()}, {rng()}};
            std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 12);
            std::int64_t direct = count_window_pairs(24, m, alpha, vec, mode);
            std::int64_t via_rep = 0;
            for (const auto& [key, cnt] : rf.counts) {
                Fraction64 dist;
                if (mode == Mode::linear_form) {
                    std::vector<std::int64_t> pos(key);
                    bool flip = pos[0] < 0;
                    if (flip)
                        for (auto& v : pos) v = -v;
                    dist = circle_dist(linear_form_frac(pos, alpha), Fraction64{0});
                } else {
                    Fraction64 worst{0};
                    for (std::size_t i = 0; i < key.size(); ++i) {
                        std::int64_t z = key[i] < 0 ? -key[i] : key[i];
                        Fraction64 di = circle_dist(frac_mul(z, {alpha[i].u}), Fraction64{0});
                        if (worst < di) worst = di;
                    }
                    dist = worst;
                }
                // closed window || . || <= 1/(2M), checked exactly in 128 bits
                unsigned __int128 lhs =
                    static_cast<unsigned __int128>(dist.u) * (2 * static_cast<u64>(m));
                if (lhs <= (static_cast<unsigned __int128>(1) << 64)) via_rep += cnt;
            }
            CHECK(direct == via_rep);
        }
    }
}

TEST_CASE("radical inverse audit: fixed rows, closed form, envelope passes") {
    auto rows2 = vdc_verify(2, 5);
    REQUIRE(rows2.size() == 4);  // N = 2..5
    CHECK(rows2[0].n == 2);
    CHECK(rows2[0].delta_min == Rational::make(1, 4));
    CHECK(rows2[3].n == 5);
    CHECK(rows2[3].delta_min == Rational::make(1, 8));
    for (const auto& r : rows2) {
        CHECK(r.pass);
        // 1/2^K for 2^(K-1) <= N < 2^K
        std::int64_t k = std::bit_width(static_cast<u64>(r.n));
        CHECK(r.delta_min == Rational::make(1, std::int64_t{1} << k));
    }

    auto rows3 = vdc_verify(3, 40);
    CHECK(rows3[0].delta_min == Rational::make(1, 3));   // N = 2
    CHECK(rows3[1].delta_min == Rational::make(2, 9));   // N = 3
    Rational prev = Rational::make(1, 2);
    for (const auto& r : rows3) {
        CHECK(r.pass);
        CHECK(r.lower <= r.delta_min);
        CHECK(r.delta_min <= r.upper);
        CHECK(r.delta_min <= prev);  // never grows
        prev = r.delta_min;
    }

    // independent cross-check against the generic exact engine
    for (std::int64_t base : {3, 5, 10}) {
        auto rows = vdc_verify(base, 30);
        PointSet<Rational> pts;
        pts.dim = 1;
        pts.coords.push_back(vdc_point(base, 1));
        for (const auto& r : rows) {
            pts.coords.push_back(vdc_point(base, r.n));
            CHECK(min_gap_bruteforce(pts).value == r.delta_min);
        }
    }

    CHECK_THROWS_AS(vdc_verify(1, 10), std::invalid_argument);
    CHECK_THROWS_AS(vdc_verify(2, 1), std::invalid_argument);
}

TEST_CASE("halton scan: fixed rows and the exact engine cross-check") {
    std::vector<std::int64_t> bases{2, 3};
    auto rows = halton_scan(bases, 60);
    REQUIRE(rows.size() == 59);
    CHECK(rows[0].n == 2);
    CHECK(rows[0].delta_min == Rational::make(1, 3));
    CHECK(rows[0].scaled == doctest::Approx((1.0 / 3) * std::sqrt(2.0)).epsilon(1e-12));

    PointSet<Rational> pts;
    pts.dim = 2;
    for (Rational r : halton_point(bases, 1)) pts.coords.push_back(r);
    double run_min = 1e300, run_max = -1e300;
    for (const auto& row : rows) {
        for (Rational r : halton_point(bases, row.n)) pts.coords.push_back(r);
        CHECK(min_gap_bruteforce(pts).value == row.delta_min);
        double scaled = row.delta_min.to_double() *
                        std::pow(static_cast<double>(row.n), 0.5);
        CHECK(row.scaled == doctest::Approx(scaled).epsilon(1e-12));
        run_min = std::min(run_min, row.scaled);
        run_max = std::max(run_max, row.scaled);
        CHECK(row.running_min == doctest::Approx(run_min).epsilon(1e-12));
        CHECK(row.running_max == doctest::Approx(run_max).epsilon(1e-12));
    }

    std::vector<std::int64_t> bad{2};
    CHECK_THROWS_AS(halton_scan(bad, 10), std::invalid_argument);
}

TEST_CASE("experiment reports are reproducible and worker-independent") {
    auto cfg = base_cfg(Mode::linear_form, 2, {"identity", "poly:k=2"}, {16, 32, 64});
    cfg.trials = 6;
    cfg.seed = 42;
    cfg.count_n = 32;
    cfg.count_m = 4;

    ExperimentReport r1 = verify_bounds(cfg);
    ExperimentReport r2 = verify_bounds(cfg);
    auto cfg8 = cfg;
    cfg8.workers = 8;
    ExperimentReport r8 = verify_bounds(cfg8);

    std::string s1 = io::dump_canonical(io::report_to_json(r1));
    std::string s2 = io::dump_canonical(io::report_to_json(r2));
    std::string s8 = io::dump_canonical(io::report_to_json(r8));
    CHECK(s1 == s2);
    CHECK(s1 == s8);

    REQUIRE(r1.curves.size() == 6);
    for (std::size_t t = 0; t < 6; ++t) {
        CHECK(r1.curves[t].trial == static_cast<std::int64_t>(t));
        REQUIRE(r1.curves[t].points.size() == 3);
        // third entry is log2 of the implicit denominator for alpha modes
        CHECK(r1.curves[t].points[0][2] == 64);
    }

    REQUIRE(r1.verdicts.size() == 4);
    for (const auto& v : r1.verdicts) {
        CHECK(v.trials == 6);
        if (v.kind == "sl")
            CHECK(v.tail_start == 32);  // median grid point by default
        else
            CHECK(v.tail_start == 0);  // threshold not used for "im" scoring
        CHECK(v.per_n.size() == 3);
        std::int64_t tail_total = 0;
        for (const auto& [n, cnt] : v.per_n) {
            CHECK(cnt >= 0);
            CHECK(cnt <= 6);
            if (v.kind == "sl" && n >= 32) tail_total += cnt;
        }
        if (v.kind == "sl") CHECK(v.sl_violations_tail == tail_total);
        if (v.kind == "im") CHECK(v.im_hits <= 6);
    }
    CHECK(r1.verdicts[0].check == "lf_env.lower");

    REQUIRE(r1.counting.has_value());
    CHECK(r1.counting->n == 32);
    CHECK(r1.counting->m == 4);
    CHECK(r1.counting->expected_pairs == doctest::Approx((32.0 * 32 - 32) / 4).epsilon(1e-12));
    CHECK(r1.counting->expected_d == doctest::Approx(496.0 / 4).epsilon(1e-12));

    CHECK(r1.diagnostics.n == 64);
    REQUIRE(r1.diagnostics.component_energy.size() == 2);
    CHECK(r1.diagnostics.component_energy[0] == additive_energy(materialize(cfg, 64).comps[0]));
    REQUIRE(r1.diagnostics.joint.size() == 1);
    CHECK(r1.diagnostics.joint[0].subset == std::vector<int>{1, 2});
    CHECK(r1.diagnostics.cards_vector.size() == 3);
    CHECK(r1.diagnostics.cards_vector[2].second == 64 * 63 / 2);  // distinct (z, z^2-ish) rows

    // bound curves cover each selected check side once
    CHECK(r1.bound_curves.size() == 4);
    for (const auto& bc : r1.bound_curves) {
        CHECK(bc.tag.substr(0, 2) == "lf");
        CHECK(bc.samples.size() == 3);
    }
}

TEST_CASE("experiment reports for deterministic modes carry exact rows") {
    ExperimentConfig v;
    v.mode = Mode::vdc;
    v.bases = {3};
    v.n_max = 50;
    ExperimentReport rep = verify_bounds(v);
    CHECK(rep.vdc_rows.size() == 49);
    REQUIRE(rep.verdicts.size() == 1);
    CHECK(rep.verdicts[0].check == "vdc");
    CHECK(rep.verdicts[0].kind == "exact");
    CHECK(rep.verdicts[0].sl_violations_tail == 0);
    CHECK(rep.bound_curves.size() == 2);
    CHECK(rep.curves.size() == 1);

    ExperimentConfig h;
    h.mode = Mode::halton;
    h.bases = {2, 3};
    h.n_max = 40;
    ExperimentReport hr = verify_bounds(h);
    CHECK(hr.halton_rows.size() == 39);
    CHECK(hr.verdicts.empty());
    CHECK(!hr.notes.empty());
}

TEST_CASE("energy diagnostics step aside when the histogram would be too large") {
    auto cfg = base_cfg(Mode::linear_form, 2, {"identity", "poly:k=2"}, {16, 64});
    cfg.energy_guard = 1000;  // 64^2 = 4096 will not fit
    ExperimentReport rep = verify_bounds(cfg);
    CHECK(rep.diagnostics.component_energy.empty());
    bool noted = false;
    for (const auto& n : rep.notes)
        if (n.find("histogram guard") != std::string::npos) noted = true;
    CHECK(noted);
}
