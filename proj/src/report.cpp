#include "bazaar/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace bazaar {

namespace {

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

std::string compact(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", value);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    return out;
}

std::vector<const ScenarioResult*> sorted_by_penalty(std::span<const ScenarioResult> results) {
    std::vector<const ScenarioResult*> sorted;
    sorted.reserve(results.size());
    for (const auto& r : results) {
        sorted.push_back(&r);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
        return a->eco_penalty < b->eco_penalty;
    });
    return sorted;
}

const char* state_name(SessionState state) {
    switch (state) {
        case SessionState::active: return "active";
        case SessionState::agreed: return "agreed";
        case SessionState::failed: return "failed";
    }
    return "unknown";
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

void write_allocation_csv(const std::filesystem::path& path, const SimulationReport& report) {
    auto out = open_out(path);
    out << "provider,hosted_count,interpolation_factor\n";
    for (const auto& row : report.allocation) {
        out << row.provider << ',' << row.hosted << ',' << fixed(row.interpolation_factor, 6)
            << '\n';
    }
}

void write_summary_csv(const std::filesystem::path& path,
                       std::span<const ScenarioResult> results) {
    auto out = open_out(path);
    out << "scenario_id,tax_policy,eco_penalty,tax_revenue,bazaar_score,consumers_served\n";
    for (const auto& r : results) {
        out << r.scenario_id << ',' << r.tax_policy << ',' << compact(r.eco_penalty) << ','
            << fixed(r.report.tax_revenue, 4) << ',' << fixed(r.report.consumer_bazaar_score, 4)
            << ',' << r.report.consumers_served << '\n';
    }
}

void write_traces_jsonl(const std::filesystem::path& path, const SimulationReport& report) {
    auto out = open_out(path);
    for (const auto& trace : report.traces) {
        for (const auto& offer : trace.offers) {
            nlohmann::ordered_json line{
                {"session", trace.session_id},
                {"t", offer.t},
                {"sender", offer.sender},
                {"storage", offer.storage},
                {"ram", offer.ram},
                {"processing_power", offer.processing_power},
                {"net_price", offer.net_price},
                {"gross_price", offer.gross_price},
                {"state", state_name(trace.final_state)},
            };
            out << line.dump() << '\n';
        }
    }
}

void write_laffer_csv(const std::filesystem::path& path,
                      std::span<const ScenarioResult> results) {
    auto out = open_out(path);
    out << "eco_penalty,tax_revenue\n";
    for (const auto* r : sorted_by_penalty(results)) {
        out << compact(r->eco_penalty) << ',' << fixed(r->report.tax_revenue, 4) << '\n';
    }
}

void write_welfare_csv(const std::filesystem::path& path,
                       std::span<const ScenarioResult> results) {
    auto out = open_out(path);
    out << "eco_penalty,bazaar_score\n";
    for (const auto* r : sorted_by_penalty(results)) {
        out << compact(r->eco_penalty) << ',' << fixed(r->report.consumer_bazaar_score, 4)
            << '\n';
    }
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    nlohmann::ordered_json doc{
        {"config_path", manifest.config_path},
        {"config_hash", manifest.config_hash},
        {"tax_policy", manifest.tax_policy},
        {"penalties", manifest.penalties},
        {"output_dir", manifest.output_dir},
        {"tool_version", manifest.tool_version},
    };
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        auto out = open_out(tmp);
        out << doc.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace bazaar
