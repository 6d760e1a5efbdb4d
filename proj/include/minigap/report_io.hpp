#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "minigap/bounds.hpp"
#include "minigap/combinat.hpp"
#include "minigap/mc.hpp"

// Serialization with a fixed byte-level contract: object keys emitted in
// sorted order, floats printed with 17 significant digits, LF line endings.
// Equal inputs produce equal bytes, which is what the determinism tests and
// the embedded config hash rely on.
namespace minigap::io {

// %.17g, rejecting non-finite values.
std::string fmt_double(double v);

// Serialize a json tree under the canonical contract (2-space indent).
std::string dump_canonical(const nlohmann::json& j);

std::uint64_t fnv1a64(std::string_view bytes);

// Config as a json object.  Scheduling knobs (workers) are left out so that
// reports do not change with the degree of parallelism.
nlohmann::json config_to_json(const mc::ExperimentConfig& cfg);

// 16 hex digits over the canonical config serialization.
std::string config_hash_hex(const mc::ExperimentConfig& cfg);

nlohmann::json report_to_json(const mc::ExperimentReport& rep);

// CSV bodies (header row first, LF endings).
std::string gap_curves_csv(const std::vector<std::vector<mc::CurvePoint>>& per_trial);
std::string report_curves_csv(const mc::ExperimentReport& rep);
std::string verdicts_csv(const mc::ExperimentReport& rep);
std::string vdc_csv(const std::vector<mc::VdcRow>& rows);
std::string halton_csv(const std::vector<mc::HaltonRow>& rows);
std::string diffset_csv(const DiffSet& ds);
std::string repfn_csv(const RepFunction& rf);
std::string bound_curves_csv(const std::vector<bounds::BoundCurve>& curves);

// Space-separated sequence columns with a comment header; the output parses
// back through the file: family.
std::string sequence_text(const std::vector<IntSeq>& comps);

// path empty -> stdout.  Failures carry the path in the message.
void write_output(const std::string& path, const std::string& bytes);

}  // namespace minigap::io
