#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "estimate.hpp"
#include "identify.hpp"
#include "refute.hpp"

namespace causal {

inline constexpr const char* kToolVersion = "0.1.0";

// Fully-resolved batch-run configuration. parse_config applies defaults,
// the optional config file, then command-line flags, in that order.
struct AnalysisConfig {
    std::string data_path;
    std::string graph_path;
    std::string graph_format = "auto";  // dot | gml | auto
    std::string treatment;
    std::string outcome;
    std::string method;  // empty -> first compatible method for the first estimand
    std::optional<std::vector<std::string>> refuters;  // unset -> all applicable
    std::uint64_t seed = 0;
    EstimationConfig estimation;
    RefuterConfig refutation;
    std::string output_path;            // empty -> stdout
    std::string output_format = "json"; // json | text
};

struct Report {
    std::string tool_version = kToolVersion;
    AnalysisConfig config;
    IdentificationResult identification;
    std::optional<EffectEstimate> estimate;  // absent when not identified
    std::vector<RefutationResult> refutations;
    std::vector<std::string> warnings;
};

// CLI tokens for the `analyze` subcommand (without the subcommand word),
// plus an optional JSON config file via --config. Throws on unknown flags,
// missing required values, or invalid names.
AnalysisConfig parse_config(const std::vector<std::string>& args);

// Model -> Identify -> Estimate -> Refute. Returns a structured
// "not identified" report (no estimate, no refutations) when no strategy
// applies; hard failures throw.
Report run_pipeline(const AnalysisConfig& cfg);

// format "json": stable key order, floats at 17 significant digits,
// newline-terminated. format "text": MODEL / IDENTIFY / ESTIMATE / REFUTE
// sections.
std::string render_report(const Report& report, const std::string& format);

// Inverse of the JSON rendering (round-trip support).
Report report_from_json(const std::string& json_text);

// `causal generate` driver: reads a synthetic-spec JSON file
// (--spec-json PATH) and writes <prefix>.csv, <prefix>.dot, <prefix>.gml
// and <prefix>.truth.json (--out-prefix PREFIX).
void run_generate(const std::vector<std::string>& args);

}  // namespace causal
