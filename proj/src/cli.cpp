#include "minigap/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "minigap/combinat.hpp"
#include "minigap/mc.hpp"
#include "minigap/report_io.hpp"
#include "minigap/seq.hpp"
#include "minigap/version.hpp"

namespace minigap::cli {

namespace {

using nlohmann::json;

// MINIGAP_OUT_DIR redirects relative output paths; everything else stays
// explicit on the command line.
std::string resolve_out(const std::string& out) {
    if (out.empty() || out.front() == '/') return out;
    const char* dir = std::getenv("MINIGAP_OUT_DIR");
    if (!dir || !*dir) return out;
    std::string prefix = dir;
    if (prefix.back() != '/') prefix += '/';
    return prefix + out;
}

struct FileConfig {
    mc::ExperimentConfig cfg;
    std::set<std::string> keys;
};

template <class T>
T get_key(const json& j, const std::string& key, const std::string& path) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::runtime_error("config file '" + path + "': key '" + key +
                                 "' has the wrong type");
    }
}

FileConfig config_from_file(const std::string& path, bool curves_default) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("config file '" + path + "': expected an object");

    static const std::set<std::string> known = {
        "mode",       "d",          "families",   "n_grid",          "trials",
        "seed",       "eps",        "delta",      "checks",          "tail_start",
        "hyp_const",  "count_n",    "count_m",    "cw_lower_variant", "bases",
        "n_max",      "workers",    "energy_guard", "include_curves"};
    for (const auto& [key, ignored] : j.items()) {
        (void)ignored;
        if (!known.count(key))
            throw std::runtime_error("config file '" + path + "': unknown key '" + key + "'");
    }

    FileConfig out;
    out.cfg.include_curves = curves_default;
    for (const auto& [key, ignored] : j.items()) {
        (void)ignored;
        out.keys.insert(key);
    }
    auto& cfg = out.cfg;
    if (j.contains("mode")) cfg.mode = mc::mode_from_string(get_key<std::string>(j, "mode", path));
    if (j.contains("d")) cfg.d = get_key<int>(j, "d", path);
    if (j.contains("families")) {
        cfg.families.clear();
        for (const auto& s : get_key<std::vector<std::string>>(j, "families", path))
            cfg.families.push_back(FamilySpec::parse(s));
    }
    if (j.contains("n_grid")) cfg.n_grid = get_key<std::vector<std::int64_t>>(j, "n_grid", path);
    if (j.contains("trials")) cfg.trials = get_key<std::int64_t>(j, "trials", path);
    if (j.contains("seed")) {
        cfg.seed = get_key<std::uint64_t>(j, "seed", path);
        cfg.seed_set = true;
    }
    if (j.contains("eps")) cfg.eps = get_key<double>(j, "eps", path);
    if (j.contains("delta")) cfg.delta = get_key<double>(j, "delta", path);
    if (j.contains("checks")) cfg.checks = get_key<std::vector<std::string>>(j, "checks", path);
    if (j.contains("tail_start")) cfg.tail_start = get_key<std::int64_t>(j, "tail_start", path);
    if (j.contains("hyp_const")) cfg.hyp_const = get_key<double>(j, "hyp_const", path);
    if (j.contains("count_n")) cfg.count_n = get_key<std::int64_t>(j, "count_n", path);
    if (j.contains("count_m")) cfg.count_m = get_key<std::int64_t>(j, "count_m", path);
    if (j.contains("cw_lower_variant")) {
        const std::string v = get_key<std::string>(j, "cw_lower_variant", path);
        if (v == "plus_eps") {
            cfg.cw_lower_variant = bounds::CwLowerVariant::plus_eps;
        } else if (v == "plus_eps_over_d") {
            cfg.cw_lower_variant = bounds::CwLowerVariant::plus_eps_over_d;
        } else {
            throw std::runtime_error("config file '" + path + "': cw_lower_variant must be "
                                     "plus_eps or plus_eps_over_d");
        }
    }
    if (j.contains("bases")) cfg.bases = get_key<std::vector<std::int64_t>>(j, "bases", path);
    if (j.contains("n_max")) cfg.n_max = get_key<std::int64_t>(j, "n_max", path);
    if (j.contains("workers")) cfg.workers = get_key<int>(j, "workers", path);
    if (j.contains("energy_guard"))
        cfg.energy_guard = get_key<std::uint64_t>(j, "energy_guard", path);
    if (j.contains("include_curves"))
        cfg.include_curves = get_key<bool>(j, "include_curves", path);
    return out;
}

// Shared option block for the sampled-alpha subcommands (gap, verify,
// report).  Values land in the struct; presence is read off the option
// pointers so file values survive unless a flag overrides them.
struct McOpts {
    std::string mode, cw_variant, config_path;
    int d = 0, workers = 0;
    std::vector<std::string> families, checks;
    std::vector<std::int64_t> n_grid, bases;
    std::int64_t trials = 0, tail_start = 0, count_n = 0, count_m = 0, n_max = 0;
    std::uint64_t seed = 0;
    double eps = 0, delta = 0, hyp_const = 0;
    std::uint64_t energy_guard = 0;
    bool include_curves = true;

    CLI::Option *o_mode = nullptr, *o_d = nullptr, *o_family = nullptr, *o_n = nullptr,
                *o_trials = nullptr, *o_seed = nullptr, *o_eps = nullptr, *o_delta = nullptr,
                *o_check = nullptr, *o_tail = nullptr, *o_hyp = nullptr, *o_cn = nullptr,
                *o_cm = nullptr, *o_var = nullptr, *o_bases = nullptr, *o_nmax = nullptr,
                *o_workers = nullptr, *o_guard = nullptr, *o_curves = nullptr,
                *o_config = nullptr;

    void attach(CLI::App* sub) {
        o_config = sub->add_option("--config", config_path,
                                   "JSON config file mirroring the run configuration; "
                                   "flags override its values");
        o_mode = sub->add_option("--mode", mode,
                                 "componentwise | scalar_vector | linear_form | vdc | halton");
        o_d = sub->add_option("--d", d, "number of coordinates");
        o_family = sub->add_option(
            "--family", families,
            "identity | poly:k=<int> | lacunary:base=<int> | file:<path>; repeat the flag "
            "for one family per coordinate");
        o_n = sub->add_option("--N", n_grid, "comma-separated increasing N grid")->delimiter(',');
        o_trials = sub->add_option("--trials", trials, "number of sampled alphas");
        o_seed = sub->add_option("--seed", seed, "64-bit master seed; required whenever "
                                                 "alphas are sampled");
        o_eps = sub->add_option("--eps", eps, "epsilon in the lower-envelope exponent");
        o_delta = sub->add_option("--delta", delta, "delta in the tail upper bounds");
        o_check = sub->add_option("--check", checks,
                                  "check selection (e.g. cw_env, lf_env.lower); repeatable");
        o_tail = sub->add_option("--tail-start", tail_start,
                                 "first grid N of the tail window (default: grid median)");
        o_hyp = sub->add_option("--hyp-const", hyp_const,
                                "C in the energy hypothesis proxy E <= C N^2 log N");
        o_cn = sub->add_option("--count-N", count_n, "N for window counting (0 disables)");
        o_cm = sub->add_option("--count-M", count_m, "M for window counting");
        o_var = sub->add_option("--cw-lower-variant", cw_variant, "plus_eps | plus_eps_over_d")
                    ->check(CLI::IsMember({"plus_eps", "plus_eps_over_d"}));
        o_bases = sub->add_option("--bases", bases, "digit bases (vdc/halton modes)")
                      ->delimiter(',');
        o_nmax = sub->add_option("--nmax", n_max, "scan horizon (vdc/halton modes)");
        o_workers = sub->add_option("--workers", workers,
                                    "worker threads; never changes the output bytes");
        o_guard = sub->add_option("--energy-guard", energy_guard,
                                  "largest N^2 the energy histogram may hold");
        o_curves = sub->add_flag("--curves,!--no-curves", include_curves,
                                 "include per-trial curves in the report");
    }

    mc::ExperimentConfig build(bool curves_default) const {
        mc::ExperimentConfig cfg;
        cfg.include_curves = curves_default;
        if (o_config->count()) {
            FileConfig fc = config_from_file(config_path, curves_default);
            cfg = fc.cfg;
        }
        if (o_mode->count()) cfg.mode = mc::mode_from_string(mode);
        if (o_d->count()) cfg.d = d;
        if (o_family->count()) {
            cfg.families.clear();
            for (const auto& s : families) cfg.families.push_back(FamilySpec::parse(s));
        }
        if (o_n->count()) cfg.n_grid = n_grid;
        if (o_trials->count()) cfg.trials = trials;
        if (o_seed->count()) {
            cfg.seed = seed;
            cfg.seed_set = true;
        }
        if (o_eps->count()) cfg.eps = eps;
        if (o_delta->count()) cfg.delta = delta;
        if (o_check->count()) cfg.checks = checks;
        if (o_tail->count()) cfg.tail_start = tail_start;
        if (o_hyp->count()) cfg.hyp_const = hyp_const;
        if (o_cn->count()) cfg.count_n = count_n;
        if (o_cm->count()) cfg.count_m = count_m;
        if (o_var->count())
            cfg.cw_lower_variant = cw_variant == "plus_eps"
                                       ? bounds::CwLowerVariant::plus_eps
                                       : bounds::CwLowerVariant::plus_eps_over_d;
        if (o_bases->count()) cfg.bases = bases;
        if (o_nmax->count()) cfg.n_max = n_max;
        if (o_workers->count()) cfg.workers = workers;
        if (o_guard->count()) cfg.energy_guard = energy_guard;
        if (o_curves->count()) cfg.include_curves = include_curves;
        return cfg;
    }
};

bool samples_alpha(mc::Mode mode) {
    return mode == mc::Mode::componentwise || mode == mc::Mode::scalar_vector ||
           mode == mc::Mode::linear_form;
}

void require_seed(const mc::ExperimentConfig& cfg, const char* sub) {
    if (samples_alpha(cfg.mode) && !cfg.seed_set)
        throw std::runtime_error(std::string(sub) +
                                 ": --seed is required (all randomness flows from the master "
                                 "seed; there is no hidden entropy)");
}

std::vector<IntSeq> build_components(const std::vector<std::string>& family_specs, int d,
                                     std::int64_t n, const char* sub) {
    if (n < 1) throw std::invalid_argument(std::string(sub) + ": --n must be >= 1");
    if (family_specs.empty())
        throw std::invalid_argument(std::string(sub) + ": at least one --family is required");
    std::vector<FamilySpec> fams;
    fams.reserve(family_specs.size());
    for (const auto& s : family_specs) fams.push_back(FamilySpec::parse(s));

    // One multi-column file spec expands to its columns directly.
    if (fams.size() == 1 && fams[0].kind == FamilySpec::Kind::file) {
        auto loaded = load_sequence_file(fams[0].path);
        if (std::holds_alternative<VecSeq>(loaded)) {
            auto& vec = std::get<VecSeq>(loaded);
            if (d != 0 && d != vec.dim())
                throw std::invalid_argument(std::string(sub) + ": --d " + std::to_string(d) +
                                            " conflicts with a " + std::to_string(vec.dim()) +
                                            "-column sequence file");
            if (vec.length() < static_cast<std::size_t>(n))
                throw std::invalid_argument(std::string(sub) + ": sequence file has " +
                                            std::to_string(vec.length()) + " terms, need " +
                                            std::to_string(n));
            std::vector<IntSeq> comps;
            for (const auto& c : vec.components) {
                IntSeq p;
                p.family_tag = c.family_tag;
                p.values.assign(c.values.begin(), c.values.begin() + n);
                comps.push_back(std::move(p));
            }
            return comps;
        }
    }

    std::vector<IntSeq> comps;
    if (fams.size() == 1 && d > 1) {
        comps.assign(static_cast<std::size_t>(d), gen_scalar(fams[0], n));
    } else {
        if (d != 0 && static_cast<std::size_t>(d) != fams.size())
            throw std::invalid_argument(std::string(sub) + ": --d " + std::to_string(d) +
                                        " conflicts with " + std::to_string(fams.size()) +
                                        " --family flags");
        for (const auto& f : fams) comps.push_back(gen_scalar(f, n));
    }
    return comps;
}

std::vector<int> parse_subset(const std::string& text) {
    std::vector<int> subset;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        try {
            subset.push_back(std::stoi(text.substr(pos, comma - pos)));
        } catch (const std::exception&) {
            throw std::invalid_argument("energy: bad --subset '" + text +
                                        "' (expected e.g. 1,2)");
        }
        pos = comma + 1;
    }
    if (subset.empty()) throw std::invalid_argument("energy: empty --subset");
    return subset;
}

std::string subset_label(const std::vector<int>& subset) {
    std::string s;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (i) s += '+';
        s += std::to_string(subset[i]);
    }
    return s;
}

int emit_and_finish(const std::string& out, const std::string& bytes, bool verbose) {
    const std::string path = resolve_out(out);
    io::write_output(path, bytes);
    if (verbose && !path.empty())
        std::cerr << "wrote " << path << " (" << bytes.size() << " bytes)\n";
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"minimal gaps of sequences mod 1: exact engines, digit sequences, and "
                 "seeded statistical monitoring"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "progress notes on stderr");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate sequence terms as loadable text");
    std::vector<std::string> gen_families;
    int gen_d = 0, gen_workers = 0;
    std::int64_t gen_n = 0;
    std::string gen_out;
    gen_cmd->add_option("--family", gen_families, "family spec; repeatable")->required();
    gen_cmd->add_option("--n", gen_n, "number of terms")->required();
    gen_cmd->add_option("--d", gen_d, "replicate a single family into d columns");
    gen_cmd->add_option("--workers", gen_workers, "accepted for uniformity; generation is serial");
    gen_cmd->add_option("-o,--out", gen_out, "output path (default: stdout)");

    // diffset
    auto* diff_cmd = app.add_subcommand("diffset", "positive difference set of the first N terms");
    std::vector<std::string> diff_families;
    int diff_d = 0, diff_workers = 0;
    std::int64_t diff_n = 0;
    std::string diff_out, diff_format = "csv";
    diff_cmd->add_option("--family", diff_families, "family spec; repeatable")->required();
    diff_cmd->add_option("--n", diff_n, "number of terms")->required();
    diff_cmd->add_option("--d", diff_d, "replicate a single family into d coordinates");
    diff_cmd->add_option("--workers", diff_workers, "accepted for uniformity");
    diff_cmd->add_option("--format", diff_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    diff_cmd->add_option("-o,--out", diff_out, "output path (default: stdout)");

    // energy
    auto* en_cmd = app.add_subcommand("energy", "additive energies and hypothesis ratios");
    std::vector<std::string> en_families, en_subsets;
    int en_d = 0, en_workers = 0;
    std::int64_t en_n = 0;
    std::uint64_t en_guard = kDefaultEnergyGuard;
    std::string en_out, en_format = "json";
    en_cmd->add_option("--family", en_families, "family spec; repeatable")->required();
    en_cmd->add_option("--n", en_n, "number of terms")->required();
    en_cmd->add_option("--d", en_d, "replicate a single family into d coordinates");
    en_cmd->add_option("--subset", en_subsets,
                       "coordinate subset for joint energy, e.g. 1,2; repeatable "
                       "(default: every subset larger than d/2)");
    en_cmd->add_option("--energy-guard", en_guard, "largest N^2 the histogram may hold");
    en_cmd->add_option("--workers", en_workers, "accepted for uniformity");
    en_cmd->add_option("--format", en_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    en_cmd->add_option("-o,--out", en_out, "output path (default: stdout)");

    // gap
    auto* gap_cmd = app.add_subcommand("gap", "per-trial minimal-gap curves over the N grid");
    McOpts gap_opts;
    gap_opts.attach(gap_cmd);
    std::string gap_out, gap_format = "csv";
    gap_cmd->add_option("--format", gap_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    gap_cmd->add_option("-o,--out", gap_out, "output path (default: stdout)");

    // verify
    auto* ver_cmd = app.add_subcommand("verify", "score the bound checks over seeded trials");
    McOpts ver_opts;
    ver_opts.attach(ver_cmd);
    std::string ver_out, ver_format = "json";
    ver_cmd->add_option("--format", ver_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    ver_cmd->add_option("-o,--out", ver_out, "output path (default: stdout)");

    // vdc-check
    auto* vdc_cmd = app.add_subcommand("vdc-check", "exact digit-reversal gap audit");
    std::int64_t vdc_base = 0, vdc_nmax = 0;
    int vdc_workers = 0;
    std::string vdc_out, vdc_format = "csv";
    vdc_cmd->add_option("--base", vdc_base, "digit base >= 2")->required();
    vdc_cmd->add_option("--nmax", vdc_nmax, "largest N to audit")->required();
    vdc_cmd->add_option("--workers", vdc_workers, "accepted for uniformity");
    vdc_cmd->add_option("--format", vdc_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    vdc_cmd->add_option("-o,--out", vdc_out, "output path (default: stdout)");

    // halton-scan
    auto* hal_cmd = app.add_subcommand("halton-scan", "scaled minimal-gap scan of a Halton set");
    std::vector<std::int64_t> hal_bases;
    std::int64_t hal_nmax = 0;
    int hal_workers = 0;
    std::string hal_out, hal_format = "csv";
    hal_cmd->add_option("--bases", hal_bases, "pairwise coprime bases, e.g. 2,3")
        ->delimiter(',')
        ->required();
    hal_cmd->add_option("--nmax", hal_nmax, "largest N to scan")->required();
    hal_cmd->add_option("--workers", hal_workers, "accepted for uniformity");
    hal_cmd->add_option("--format", hal_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    hal_cmd->add_option("-o,--out", hal_out, "output path (default: stdout)");

    // report
    auto* rep_cmd = app.add_subcommand("report", "full experiment report with curves");
    McOpts rep_opts;
    rep_opts.attach(rep_cmd);
    std::string rep_out, rep_format = "json";
    rep_cmd->add_option("--format", rep_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    rep_cmd->add_option("-o,--out", rep_out, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (gen_cmd->parsed()) {
            auto comps = build_components(gen_families, gen_d, gen_n, "gen");
            return emit_and_finish(gen_out, io::sequence_text(comps), verbose);
        }

        if (diff_cmd->parsed()) {
            auto comps = build_components(diff_families, diff_d, diff_n, "diffset");
            DiffSet ds;
            if (comps.size() == 1) {
                ds = diff_set_scalar(comps[0]);
            } else {
                VecSeq vec;
                vec.components = comps;
                vec.validate();
                ds = diff_set_vector(vec);
            }
            if (diff_format == "csv") return emit_and_finish(diff_out, io::diffset_csv(ds), verbose);
            json j;
            j["dim"] = ds.dim;
            j["cardinality"] = ds.cardinality();
            j["n"] = diff_n;
            std::vector<std::string> tags;
            for (const auto& c : comps) tags.push_back(c.family_tag);
            j["families"] = tags;
            json elems = json::array();
            for (std::size_t r = 0; r < ds.cardinality(); ++r) {
                auto row = ds.row(r);
                elems.push_back(std::vector<std::int64_t>(row.begin(), row.end()));
            }
            j["elements"] = std::move(elems);
            return emit_and_finish(diff_out, io::dump_canonical(j), verbose);
        }

        if (en_cmd->parsed()) {
            auto comps = build_components(en_families, en_d, en_n, "energy");
            const int d = static_cast<int>(comps.size());
            std::vector<std::int64_t> component_energy;
            for (const auto& c : comps)
                component_energy.push_back(additive_energy(c, en_guard));
            std::vector<std::vector<int>> subsets;
            if (!en_subsets.empty()) {
                for (const auto& s : en_subsets) subsets.push_back(parse_subset(s));
            } else if (d >= 2) {
                for (unsigned mask = 1; mask < (1u << d); ++mask) {
                    if (2 * std::popcount(mask) <= d) continue;
                    std::vector<int> subset;
                    for (int i = 0; i < d; ++i)
                        if (mask & (1u << i)) subset.push_back(i + 1);
                    subsets.push_back(std::move(subset));
                }
            }
            VecSeq vec;
            if (d >= 2) {
                vec.components = comps;
                vec.validate();
            }
            struct JointRow {
                std::vector<int> subset;
                std::int64_t energy;
                double ratio;
            };
            std::vector<JointRow> joint;
            for (const auto& subset : subsets) {
                if (d < 2)
                    throw std::invalid_argument("energy: --subset needs a vector sequence");
                std::int64_t e = joint_additive_energy(vec, subset, en_guard);
                joint.push_back({subset, e,
                                 static_cast<double>(e) / (static_cast<double>(en_n) *
                                                           static_cast<double>(en_n))});
            }
            if (en_format == "csv") {
                std::string out = "subset,energy,ratio_n2\n";
                for (int i = 0; i < d; ++i) {
                    const double ratio = static_cast<double>(component_energy[
                                             static_cast<std::size_t>(i)]) /
                                         (static_cast<double>(en_n) * static_cast<double>(en_n));
                    out += std::to_string(i + 1) + ',' +
                           std::to_string(component_energy[static_cast<std::size_t>(i)]) + ',' +
                           io::fmt_double(ratio) + '\n';
                }
                for (const auto& row : joint)
                    out += subset_label(row.subset) + ',' + std::to_string(row.energy) + ',' +
                           io::fmt_double(row.ratio) + '\n';
                return emit_and_finish(en_out, out, verbose);
            }
            json j;
            j["n"] = en_n;
            j["d"] = d;
            std::vector<std::string> tags;
            for (const auto& c : comps) tags.push_back(c.family_tag);
            j["families"] = tags;
            j["sidon_min"] = 2 * en_n * en_n - en_n;
            j["component_energy"] = component_energy;
            json jj = json::array();
            for (const auto& row : joint) {
                json je;
                je["subset"] = row.subset;
                je["energy"] = row.energy;
                je["ratio_n2"] = row.ratio;
                jj.push_back(std::move(je));
            }
            j["joint"] = std::move(jj);
            return emit_and_finish(en_out, io::dump_canonical(j), verbose);
        }

        if (gap_cmd->parsed()) {
            mc::ExperimentConfig cfg = gap_opts.build(true);
            if (!samples_alpha(cfg.mode))
                throw std::runtime_error(
                    "gap: digit sequences have no alpha; use vdc-check or halton-scan");
            require_seed(cfg, "gap");
            cfg.validate(false);
            std::vector<std::vector<mc::CurvePoint>> per_trial;
            per_trial.reserve(static_cast<std::size_t>(cfg.trials));
            for (std::int64_t t = 0; t < cfg.trials; ++t) {
                auto alpha = mc::sample_alpha(cfg.d, cfg.seed, static_cast<std::uint64_t>(t));
                per_trial.push_back(mc::gap_curve(cfg, alpha));
            }
            if (gap_format == "csv")
                return emit_and_finish(gap_out, io::gap_curves_csv(per_trial), verbose);
            json j;
            j["config"] = io::config_to_json(cfg);
            j["config_hash"] = io::config_hash_hex(cfg);
            j["seed"] = cfg.seed;
            j["version"] = kVersion;
            json curves = json::array();
            for (std::size_t t = 0; t < per_trial.size(); ++t) {
                json jc;
                jc["trial"] = t;
                jc["mode"] = mc::to_string(cfg.mode);
                json pts = json::array();
                json wit = json::array();
                for (const auto& p : per_trial[t]) {
                    pts.push_back(json::array(
                        {p.n, p.gap.value.u, 64}));
                    wit.push_back(json::array({p.gap.first + 1, p.gap.second + 1}));
                }
                jc["points"] = std::move(pts);
                jc["witnesses"] = std::move(wit);
                curves.push_back(std::move(jc));
            }
            j["curves"] = std::move(curves);
            return emit_and_finish(gap_out, io::dump_canonical(j), verbose);
        }

        if (ver_cmd->parsed() || rep_cmd->parsed()) {
            const bool full = rep_cmd->parsed();
            McOpts& opts = full ? rep_opts : ver_opts;
            const std::string& format = full ? rep_format : ver_format;
            const std::string& out = full ? rep_out : ver_out;
            mc::ExperimentConfig cfg = opts.build(full);
            require_seed(cfg, full ? "report" : "verify");
            mc::ExperimentReport rep = mc::verify_bounds(cfg);
            std::string bytes;
            if (format == "csv") {
                bytes = full ? io::report_curves_csv(rep) : io::verdicts_csv(rep);
            } else {
                bytes = io::dump_canonical(io::report_to_json(rep));
            }
            return emit_and_finish(out, bytes, verbose);
        }

        if (vdc_cmd->parsed()) {
            mc::ExperimentConfig cfg;
            cfg.mode = mc::Mode::vdc;
            cfg.bases = {vdc_base};
            cfg.n_max = vdc_nmax;
            mc::ExperimentReport rep = mc::verify_bounds(cfg);
            std::string bytes = vdc_format == "csv"
                                    ? io::vdc_csv(rep.vdc_rows)
                                    : io::dump_canonical(io::report_to_json(rep));
            return emit_and_finish(vdc_out, bytes, verbose);
        }

        if (hal_cmd->parsed()) {
            mc::ExperimentConfig cfg;
            cfg.mode = mc::Mode::halton;
            cfg.bases = hal_bases;
            cfg.n_max = hal_nmax;
            mc::ExperimentReport rep = mc::verify_bounds(cfg);
            std::string bytes = hal_format == "csv"
                                    ? io::halton_csv(rep.halton_rows)
                                    : io::dump_canonical(io::report_to_json(rep));
            return emit_and_finish(hal_out, bytes, verbose);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace minigap::cli
