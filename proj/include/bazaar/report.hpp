#ifndef BAZAAR_REPORT_HPP
#define BAZAAR_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bazaar/sim.hpp"

namespace bazaar {

/// Provenance record written next to every output set.
struct RunManifest {
    std::string config_path;
    std::string config_hash;  ///< FNV-1a 64 of the config bytes, hex
    std::string tax_policy;
    std::vector<double> penalties;  ///< swept eco penalties; single value for plain runs
    std::string output_dir;
    std::string tool_version;
};

/// FNV-1a 64-bit, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// One scenario's outcome within a sweep (or a single run).
struct ScenarioResult {
    std::string scenario_id;
    std::string tax_policy;
    double eco_penalty = 0.0;  ///< 0 for non-GreenCloud policies
    SimulationReport report;
};

// Writers. Currency is rounded to 4 decimals at emission; interpolation
// factors to 6. All files end with a trailing newline.
void write_allocation_csv(const std::filesystem::path& path, const SimulationReport& report);
void write_summary_csv(const std::filesystem::path& path, std::span<const ScenarioResult> results);
void write_traces_jsonl(const std::filesystem::path& path, const SimulationReport& report);
void write_laffer_csv(const std::filesystem::path& path, std::span<const ScenarioResult> results);
void write_welfare_csv(const std::filesystem::path& path, std::span<const ScenarioResult> results);

/// Writes manifest.json atomically (temp file + rename).
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace bazaar

#endif
