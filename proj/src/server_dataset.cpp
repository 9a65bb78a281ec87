#include "bazaar/server_dataset.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace bazaar {

namespace {

/// Splits one CSV record; double quotes wrap fields containing commas,
/// "" inside a quoted field is a literal quote.
std::vector<std::string> split_csv_line(std::string_view line, std::string_view origin,
                                        std::size_t lineno) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"' && current.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (quoted) {
        std::ostringstream err;
        err << origin << ":" << lineno << ": unterminated quote";
        throw DatasetError(err.str());
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void fail(std::string_view origin, std::size_t lineno, const std::string& what) {
    std::ostringstream err;
    err << origin << ":" << lineno << ": " << what;
    throw DatasetError(err.str());
}

}  // namespace

std::vector<ServerDatasetRow> parse_server_dataset(std::string_view text,
                                                   std::string_view origin) {
    std::vector<ServerDatasetRow> rows;
    std::set<std::string> seen;
    std::size_t lineno = 0;
    bool header_ok = false;

    std::istringstream stream{std::string(text)};
    std::string line;
    while (std::getline(stream, line)) {
        ++lineno;
        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        auto fields = split_csv_line(stripped, origin, lineno);
        if (!header_ok) {
            if (fields.size() != 3 || trim(fields[0]) != "provider" ||
                trim(fields[1]) != "vendor_model" || trim(fields[2]) != "ssj_ops_per_watt") {
                fail(origin, lineno,
                     "expected header 'provider,vendor_model,ssj_ops_per_watt'");
            }
            header_ok = true;
            continue;
        }
        if (fields.size() != 3) {
            fail(origin, lineno,
                 "expected 3 fields, got " + std::to_string(fields.size()));
        }
        ServerDatasetRow row;
        row.provider_label = std::string(trim(fields[0]));
        row.vendor_model = std::string(trim(fields[1]));
        const std::string_view value = trim(fields[2]);
        const auto [ptr, ec] =
            std::from_chars(value.data(), value.data() + value.size(), row.ssj_ops_per_watt);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            fail(origin, lineno, "cannot parse ssj_ops_per_watt '" + std::string(value) + "'");
        }
        if (row.provider_label.empty()) {
            fail(origin, lineno, "empty provider label");
        }
        if (!(row.ssj_ops_per_watt > 0.0)) {
            fail(origin, lineno, "ssj_ops_per_watt must be strictly positive");
        }
        if (!seen.insert(row.provider_label).second) {
            fail(origin, lineno, "duplicate provider label '" + row.provider_label + "'");
        }
        rows.push_back(std::move(row));
    }
    if (!header_ok) {
        fail(origin, lineno ? lineno : 1, "missing header");
    }
    if (rows.size() < 2) {
        throw DatasetError(std::string(origin) +
                           ": need at least 2 servers for min-max normalization, got " +
                           std::to_string(rows.size()));
    }
    return rows;
}

std::vector<ServerDatasetRow> load_server_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DatasetError("cannot open server dataset '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_server_dataset(buf.str(), path.string());
}

EfficiencyTable build_efficiency_table(std::span<const ServerDatasetRow> rows,
                                       double eco_penalty) {
    if (rows.size() < 2) {
        throw DatasetError("efficiency table needs at least 2 servers");
    }
    double lo = rows.front().ssj_ops_per_watt;
    double hi = lo;
    for (const auto& row : rows) {
        lo = std::min(lo, row.ssj_ops_per_watt);
        hi = std::max(hi, row.ssj_ops_per_watt);
    }
    if (!(lo < hi)) {
        throw DatasetError("efficiency table degenerate: all servers share one ssj_ops/watt");
    }
    EfficiencyTable table;
    for (const auto& row : rows) {
        EfficiencyEntry entry;
        entry.ssj_ops_per_watt = row.ssj_ops_per_watt;
        entry.interpolation_factor = interpolation_factor(row.ssj_ops_per_watt, lo, hi);
        entry.efficiency_factor = efficiency_factor(entry.interpolation_factor, eco_penalty);
        table.emplace(row.provider_label, entry);
    }
    return table;
}

}  // namespace bazaar
