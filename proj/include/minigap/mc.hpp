#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minigap/bounds.hpp"
#include "minigap/combinat.hpp"
#include "minigap/seq.hpp"
#include "minigap/torus.hpp"

namespace minigap::mc {

// How sequence terms act on the sampled alpha:
//   componentwise - ({a_n^(i) alpha_i})_i, one family per coordinate
//   scalar_vector - ({a_n alpha_i})_i, one scalar family against d coordinates
//   linear_form   - {sum_i a_n^(i) alpha_i}, a single circle coordinate
//   vdc / halton  - deterministic radical-inverse points, no alpha involved
enum class Mode { componentwise, scalar_vector, linear_form, vdc, halton };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& text);

struct ExperimentConfig {
    Mode mode = Mode::linear_form;
    int d = 2;
    std::vector<FamilySpec> families;
    std::vector<std::int64_t> n_grid;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double eps = 0.5;
    double delta = 0.1;
    // Bound checks to score, e.g. "lf_env" or "lf_env.lower"; empty selects
    // the full set applicable to the mode.
    std::vector<std::string> checks;
    std::int64_t tail_start = 0;  // 0: median of n_grid
    double hyp_const = 8.0;       // energy hypothesis proxy E <= C * N^2 * log N
    std::int64_t count_n = 0;     // window-count statistics, 0 disables
    std::int64_t count_m = 0;
    bounds::CwLowerVariant cw_lower_variant = bounds::CwLowerVariant::plus_eps;
    std::vector<std::int64_t> bases;  // vdc (one) / halton (d >= 2)
    std::int64_t n_max = 0;           // vdc / halton scan horizon
    int workers = 1;
    std::size_t energy_guard = kDefaultEnergyGuard;
    bool include_curves = true;

    // for_checks additionally demands what bound scoring needs (N >= 16 on
    // the grid, d >= 2 everywhere).  Without it a linear_form config with
    // d = 1 is legal so the scalar sequence {a_n alpha} can be cross-checked.
    void validate(bool for_checks) const;
};

// One uniform word per (seed, trial, coordinate) through a counter-based
// mix, so any trial of any worker regenerates identically.
std::vector<Fraction64> sample_alpha(int d, std::uint64_t master_seed, std::uint64_t trial_index);

struct CurvePoint {
    std::int64_t n = 0;
    GapResult gap;
};

// Minimal gap of the first N points for every N on the grid; alpha must
// match the mode's dimension.
std::vector<CurvePoint> gap_curve(const ExperimentConfig& cfg, std::span<const Fraction64> alpha);

// Materialized term sequences for an alpha-mode config: one component per
// coordinate (scalar_vector replicates its family across d components; a
// single family spec likewise serves every coordinate) and, when the mode
// has one, the underlying scalar sequence.
struct Sequences {
    std::vector<IntSeq> comps;
    IntSeq scalar;
    bool has_scalar = false;

    VecSeq as_vecseq() const;  // requires >= 2 components
};
Sequences materialize(const ExperimentConfig& cfg, std::int64_t n);

// Difference-set route: how many elements z of ds land within the closed
// window ||z alpha|| <= 1/(2M), exact.  ds may be scalar (each z multiplies
// every coordinate) or match alpha's dimension; under linear_form the test
// value is {z . alpha}.
std::int64_t count_window_scalar(std::int64_t m_window, std::span<const Fraction64> alpha,
                                 const DiffSet& ds, Mode mode);

// Pair route: ordered pairs n != m of the first N terms whose difference
// falls in the same window; always even by symmetry.
std::int64_t count_window_pairs(std::int64_t n, std::int64_t m_window,
                                std::span<const Fraction64> alpha, const VecSeq& seq, Mode mode);

// Smallest ||z alpha|| over 1 <= z <= z_max together with the attaining z,
// via the continued fraction of alpha: the record-setting multipliers are
// exactly the convergent denominators.
struct CfMin {
    Fraction64 value;
    std::int64_t z = 1;
};
CfMin cf_min_oracle(Fraction64 alpha, std::int64_t z_max);

// Exact minimal-gap audit of the base-b radical-inverse sequence for every
// N <= n_max against the 1/(bN) .. b/N envelope (1/N for b = 2, where the
// gap additionally equals 1/2^K for 2^(K-1) <= N < 2^K).
struct VdcRow {
    std::int64_t n = 0;
    Rational delta_min;
    Rational lower;
    Rational upper;
    bool pass = false;
};
std::vector<VdcRow> vdc_verify(std::int64_t base, std::int64_t n_max);

// Exact minimal sup-gap of the Halton sequence for every N <= n_max, with
// the N^(1/d)-scaled value tracked for plotting.
struct HaltonRow {
    std::int64_t n = 0;
    Rational delta_min;
    double scaled = 0.0;
    double running_min = 0.0;
    double running_max = 0.0;
};
std::vector<HaltonRow> halton_scan(std::span<const std::int64_t> bases, std::int64_t n_max);

// Scored outcome of one bound check over all trials.  "sl" checks count
// violations at grid points N >= tail_start; "im" checks count trials with
// at least one satisfying grid point.
struct Verdict {
    std::string check;  // e.g. "lf_env.lower"
    std::string kind;   // "sl" | "im" | "exact"
    bool hypothesis_required = false;
    bool hypothesis_met = true;
    std::int64_t trials = 0;
    std::int64_t tail_start = 0;
    std::int64_t sl_violations_tail = 0;
    std::int64_t trials_with_tail_violation = 0;
    std::int64_t im_hits = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> per_n;  // (N, violation/hit count)
};

struct TrialCurve {
    std::int64_t trial = 0;
    // (N, gap numerator, denominator).  For alpha modes the denominator is
    // implicitly 2^64 and the third entry stores its log2; for vdc/halton
    // rows it is the literal reduced denominator.
    std::vector<std::array<std::uint64_t, 3>> points;
};

struct CountingStats {
    std::int64_t n = 0;
    std::int64_t m = 0;
    std::int64_t trials = 0;
    double mean_d = 0, expected_d = 0, stderr_d = 0, var_d = 0;
    double mean_pairs = 0, expected_pairs = 0, stderr_pairs = 0, var_pairs = 0;
};

struct EnergyDiag {
    std::vector<int> subset;  // 1-based coordinates; empty = scalar component entry
    std::int64_t energy = 0;
    double ratio_n2 = 0.0;  // energy / N^2
    bool hypothesis_ok = true;
};

struct Diagnostics {
    std::int64_t n = 0;  // horizon the energies are taken at
    double hyp_const = 0.0;
    std::vector<std::int64_t> component_energy;
    std::int64_t min_component_energy = 0;
    std::vector<EnergyDiag> joint;
    std::vector<std::pair<std::int64_t, std::int64_t>> cards_scalar;  // (N, C_N)
    std::vector<std::pair<std::int64_t, std::int64_t>> cards_vector;  // (N, #vector diffs)
};

struct ExperimentReport {
    ExperimentConfig config;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<TrialCurve> curves;
    std::vector<bounds::BoundCurve> bound_curves;
    std::vector<Verdict> verdicts;
    std::optional<CountingStats> counting;
    Diagnostics diagnostics;
    std::vector<std::string> notes;
    std::vector<VdcRow> vdc_rows;        // mode == vdc
    std::vector<HaltonRow> halton_rows;  // mode == halton
};

// Full experiment: sample trials of alpha, score the selected bound checks,
// gather window counts and energy diagnostics.  Output is a pure function
// of (config, seed); the worker count only changes the wall clock.
ExperimentReport verify_bounds(const ExperimentConfig& cfg);

// Check names applicable to a mode, in scoring order.
std::vector<std::string> default_checks(Mode mode);

}  // namespace minigap::mc
