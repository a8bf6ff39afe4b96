#pragma once

#include "crn/crn.hpp"

#include <json.hpp>

#include <cstdint>
#include <set>
#include <string>

namespace crncap {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "crncap";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1.0.0";

enum class SymmetryMode { Explicit, Infer, None };

SymmetryMode parse_symmetry_mode(const std::string& s);
std::string to_string(SymmetryMode m);

struct AnalyzeOptions {
    SymmetryMode symmetry = SymmetryMode::Explicit;
    std::set<std::string> frozen;
    bool validate = false;
    std::size_t jobs = 0;
    std::uint64_t seed = 20240101;
};

crn::ParsedNetwork load_network(const std::string& path, SymmetryMode mode);
crn::ParsedNetwork load_network_text(const std::string& text, SymmetryMode mode);

Json polynomial_json(const crn::Polynomial& p, const std::function<std::string(crn::SymbolId)>& name);
Json motif_graph_json(const crn::InstabilityMotif& motif);

// Full pipeline report. `input_name` is recorded verbatim.
Json analyze_report(const crn::ParsedNetwork& parsed, const AnalyzeOptions& opts, const std::string& input_name);
Json motifs_report(const crn::ParsedNetwork& parsed, const AnalyzeOptions& opts, const std::string& input_name);

// 0 for a completed analysis, 3 for inconsistent or degenerate networks.
int report_exit_code(const Json& report);

std::string render_analysis_text(const Json& report);
std::string render_motifs_text(const Json& report);

}  // namespace crncap
