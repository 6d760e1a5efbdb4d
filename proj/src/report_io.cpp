#include "minigap/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "minigap/bounds.hpp"

namespace minigap::io {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

void dump(const nlohmann::json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::null: out += "null"; break;
        case nlohmann::json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case nlohmann::json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case nlohmann::json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case nlohmann::json::value_t::number_float: out += fmt_double(j.get<double>()); break;
        case nlohmann::json::value_t::string: out += '"' + escape(j.get<std::string>()) + '"'; break;
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            // Flat arrays of scalars stay on one line; nested ones indent.
            bool scalars_only = true;
            for (const auto& el : j)
                if (el.is_structured()) scalars_only = false;
            if (scalars_only) {
                out += '[';
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    dump(j[i], out, depth);
                }
                out += ']';
            } else {
                out += "[\n";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    out += pad_in;
                    dump(j[i], out, depth + 1);
                    if (i + 1 < j.size()) out += ',';
                    out += '\n';
                }
                out += pad + ']';
            }
            break;
        }
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& [key, val] : j.items()) {
                out += pad_in + '"' + escape(key) + "\": ";
                dump(val, out, depth + 1);
                if (++i < j.size()) out += ',';
                out += '\n';
            }
            out += pad + '}';
            break;
        }
        default: throw std::logic_error("unsupported json node");
    }
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

std::string i2s(std::int64_t v) { return std::to_string(v); }
std::string u2s(std::uint64_t v) { return std::to_string(v); }

}  // namespace

std::string fmt_double(double v) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite value in serialized output");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dump_canonical(const nlohmann::json& j) {
    std::string out;
    dump(j, out, 0);
    out += '\n';
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

nlohmann::json config_to_json(const mc::ExperimentConfig& cfg) {
    nlohmann::json j;
    j["mode"] = mc::to_string(cfg.mode);
    if (cfg.mode == mc::Mode::vdc || cfg.mode == mc::Mode::halton) {
        j["bases"] = cfg.bases;
        j["n_max"] = cfg.n_max;
        return j;
    }
    j["d"] = cfg.d;
    std::vector<std::string> fams;
    for (const auto& f : cfg.families) fams.push_back(f.tag());
    j["families"] = fams;
    j["n_grid"] = cfg.n_grid;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["eps"] = cfg.eps;
    j["delta"] = cfg.delta;
    j["checks"] = cfg.checks.empty() ? mc::default_checks(cfg.mode) : cfg.checks;
    j["tail_start"] = cfg.tail_start;
    j["hyp_const"] = cfg.hyp_const;
    j["count_n"] = cfg.count_n;
    j["count_m"] = cfg.count_m;
    j["cw_lower_variant"] = cfg.cw_lower_variant == bounds::CwLowerVariant::plus_eps
                                ? "plus_eps"
                                : "plus_eps_over_d";
    j["energy_guard"] = cfg.energy_guard;
    j["include_curves"] = cfg.include_curves;
    return j;
}

std::string config_hash_hex(const mc::ExperimentConfig& cfg) {
    const std::uint64_t h = fnv1a64(dump_canonical(config_to_json(cfg)));
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

nlohmann::json rational_json(const Rational& r) {
    return nlohmann::json::array({r.num, r.den});
}

}  // namespace

nlohmann::json report_to_json(const mc::ExperimentReport& rep) {
    nlohmann::json j;
    j["config"] = config_to_json(rep.config);
    j["config_hash"] = config_hash_hex(rep.config);
    j["seed"] = rep.seed;
    j["version"] = rep.version;

    nlohmann::json curves = nlohmann::json::array();
    for (const auto& c : rep.curves) {
        nlohmann::json jc;
        jc["trial"] = c.trial;
        jc["mode"] = mc::to_string(rep.config.mode);
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : c.points) pts.push_back(nlohmann::json::array({p[0], p[1], p[2]}));
        jc["points"] = pts;
        curves.push_back(std::move(jc));
    }
    j["curves"] = std::move(curves);

    nlohmann::json bcs = nlohmann::json::array();
    for (const auto& b : rep.bound_curves) {
        nlohmann::json jb;
        jb["tag"] = b.tag;
        jb["side"] = b.side;
        nlohmann::json params = nlohmann::json::object();
        for (const auto& [k, v] : b.params) params[k] = v;
        jb["params"] = std::move(params);
        nlohmann::json samples = nlohmann::json::array();
        for (const auto& [n, v] : b.samples) samples.push_back(nlohmann::json::array({n, v}));
        jb["samples"] = std::move(samples);
        bcs.push_back(std::move(jb));
    }
    j["bound_curves"] = std::move(bcs);

    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : rep.verdicts) {
        nlohmann::json jv;
        jv["check"] = v.check;
        jv["kind"] = v.kind;
        jv["trials"] = v.trials;
        jv["tail_start"] = v.tail_start;
        jv["sl_violations_tail"] = v.sl_violations_tail;
        jv["trials_with_tail_violation"] = v.trials_with_tail_violation;
        jv["im_hits"] = v.im_hits;
        jv["hypothesis_required"] = v.hypothesis_required;
        jv["hypothesis_met"] = v.hypothesis_met;
        nlohmann::json per_n = nlohmann::json::array();
        for (const auto& [n, cnt] : v.per_n) per_n.push_back(nlohmann::json::array({n, cnt}));
        jv["per_n"] = std::move(per_n);
        verdicts.push_back(std::move(jv));
    }
    j["verdicts"] = std::move(verdicts);

    if (rep.counting) {
        const auto& cs = *rep.counting;
        nlohmann::json jc;
        jc["n"] = cs.n;
        jc["m"] = cs.m;
        jc["trials"] = cs.trials;
        jc["mean_d"] = cs.mean_d;
        jc["expected_d"] = cs.expected_d;
        jc["var_d"] = cs.var_d;
        jc["stderr_d"] = cs.stderr_d;
        jc["mean_pairs"] = cs.mean_pairs;
        jc["expected_pairs"] = cs.expected_pairs;
        jc["var_pairs"] = cs.var_pairs;
        jc["stderr_pairs"] = cs.stderr_pairs;
        j["counting"] = std::move(jc);
    }

    nlohmann::json diag;
    diag["n"] = rep.diagnostics.n;
    diag["hyp_const"] = rep.diagnostics.hyp_const;
    diag["component_energy"] = rep.diagnostics.component_energy;
    diag["min_component_energy"] = rep.diagnostics.min_component_energy;
    nlohmann::json joint = nlohmann::json::array();
    for (const auto& e : rep.diagnostics.joint) {
        nlohmann::json je;
        je["subset"] = e.subset;
        je["energy"] = e.energy;
        je["ratio_n2"] = e.ratio_n2;
        je["hypothesis_ok"] = e.hypothesis_ok;
        joint.push_back(std::move(je));
    }
    diag["joint"] = std::move(joint);
    nlohmann::json cards_v = nlohmann::json::array();
    for (const auto& [n, c] : rep.diagnostics.cards_vector)
        cards_v.push_back(nlohmann::json::array({n, c}));
    diag["cards_vector"] = std::move(cards_v);
    nlohmann::json cards_s = nlohmann::json::array();
    for (const auto& [n, c] : rep.diagnostics.cards_scalar)
        cards_s.push_back(nlohmann::json::array({n, c}));
    diag["cards_scalar"] = std::move(cards_s);
    j["diagnostics"] = std::move(diag);

    if (!rep.vdc_rows.empty()) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : rep.vdc_rows) {
            nlohmann::json jr;
            jr["n"] = r.n;
            jr["delta"] = rational_json(r.delta_min);
            jr["lower"] = rational_json(r.lower);
            jr["upper"] = rational_json(r.upper);
            jr["pass"] = r.pass;
            rows.push_back(std::move(jr));
        }
        j["vdc_rows"] = std::move(rows);
    }
    if (!rep.halton_rows.empty()) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : rep.halton_rows) {
            nlohmann::json jr;
            jr["n"] = r.n;
            jr["delta"] = rational_json(r.delta_min);
            jr["scaled"] = r.scaled;
            jr["running_min"] = r.running_min;
            jr["running_max"] = r.running_max;
            rows.push_back(std::move(jr));
        }
        j["halton_rows"] = std::move(rows);
    }

    j["notes"] = rep.notes;
    return j;
}

std::string gap_curves_csv(const std::vector<std::vector<mc::CurvePoint>>& per_trial) {
    std::string out = "N,value,num,den_log2,witness_a,witness_b,trial\n";
    for (std::size_t t = 0; t < per_trial.size(); ++t) {
        for (const auto& p : per_trial[t]) {
            out += csv_line({i2s(p.n), fmt_double(p.gap.value.to_double()), u2s(p.gap.value.u),
                             "64", u2s(p.gap.first + 1), u2s(p.gap.second + 1),
                             u2s(static_cast<std::uint64_t>(t))});
        }
    }
    return out;
}

std::string report_curves_csv(const mc::ExperimentReport& rep) {
    std::string out = "N,value,num,den_or_log2den,trial\n";
    for (const auto& c : rep.curves) {
        for (const auto& p : c.points) {
            const bool dyadic = rep.config.mode != mc::Mode::vdc &&
                                rep.config.mode != mc::Mode::halton;
            const double val = dyadic
                                   ? std::ldexp(static_cast<double>(p[1]), -64)
                                   : static_cast<double>(p[1]) / static_cast<double>(p[2]);
            out += csv_line({u2s(p[0]), fmt_double(val), u2s(p[1]), u2s(p[2]),
                             i2s(c.trial)});
        }
    }
    return out;
}

std::string verdicts_csv(const mc::ExperimentReport& rep) {
    std::string out =
        "check,kind,trials,tail_start,sl_violations_tail,trials_with_tail_violation,im_hits,"
        "hypothesis_required,hypothesis_met\n";
    for (const auto& v : rep.verdicts) {
        out += csv_line({v.check, v.kind, i2s(v.trials), i2s(v.tail_start),
                         i2s(v.sl_violations_tail), i2s(v.trials_with_tail_violation),
                         i2s(v.im_hits), v.hypothesis_required ? "1" : "0",
                         v.hypothesis_met ? "1" : "0"});
    }
    return out;
}

std::string vdc_csv(const std::vector<mc::VdcRow>& rows) {
    std::string out = "N,value,num,den,lower,upper,pass\n";
    for (const auto& r : rows) {
        out += csv_line({i2s(r.n), fmt_double(r.delta_min.to_double()), i2s(r.delta_min.num),
                         i2s(r.delta_min.den), fmt_double(r.lower.to_double()),
                         fmt_double(r.upper.to_double()), r.pass ? "1" : "0"});
    }
    return out;
}

std::string halton_csv(const std::vector<mc::HaltonRow>& rows) {
    std::string out = "N,value,num,den,scaled,running_min,running_max\n";
    for (const auto& r : rows) {
        out += csv_line({i2s(r.n), fmt_double(r.delta_min.to_double()), i2s(r.delta_min.num),
                         i2s(r.delta_min.den), fmt_double(r.scaled), fmt_double(r.running_min),
                         fmt_double(r.running_max)});
    }
    return out;
}

std::string diffset_csv(const DiffSet& ds) {
    std::string out;
    if (ds.dim == 1) {
        out = "z\n";
    } else {
        for (int c = 1; c <= ds.dim; ++c) {
            if (c > 1) out += ',';
            out += "z" + std::to_string(c);
        }
        out += '\n';
    }
    for (std::size_t r = 0; r < ds.cardinality(); ++r) {
        auto row = ds.row(r);
        std::vector<std::string> cells;
        for (std::int64_t v : row) cells.push_back(i2s(v));
        out += csv_line(cells);
    }
    return out;
}

std::string repfn_csv(const RepFunction& rf) {
    std::string out;
    for (std::size_t c = 1; c <= rf.dprime.size(); ++c) {
        if (c > 1) out += ',';
        out += "v" + std::to_string(c);
    }
    out += ",count\n";
    for (const auto& [key, cnt] : rf.counts) {
        std::vector<std::string> cells;
        for (std::int64_t v : key) cells.push_back(i2s(v));
        cells.push_back(i2s(cnt));
        out += csv_line(cells);
    }
    return out;
}

std::string bound_curves_csv(const std::vector<bounds::BoundCurve>& curves) {
    std::string out = "N,value,tag,side,params\n";
    for (const auto& c : curves) {
        std::string params;
        for (const auto& [k, v] : c.params) {
            if (!params.empty()) params += ';';
            params += k + '=' + fmt_double(v);
        }
        for (const auto& [n, v] : c.samples)
            out += csv_line({i2s(n), fmt_double(v), c.tag, c.side, params});
    }
    return out;
}

std::string sequence_text(const std::vector<IntSeq>& comps) {
    if (comps.empty()) throw std::invalid_argument("sequence_text: nothing to write");
    const std::size_t n = comps[0].values.size();
    for (const auto& c : comps)
        if (c.values.size() != n)
            throw std::invalid_argument("sequence_text: ragged components");
    std::string out = "#";
    for (const auto& c : comps) out += ' ' + c.family_tag;
    out += '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < comps.size(); ++c) {
            if (c) out += ' ';
            out += std::to_string(comps[c].values[i]);
        }
        out += '\n';
    }
    return out;
}

void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty()) {
        std::cout << bytes;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace minigap::io
