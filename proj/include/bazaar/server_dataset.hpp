#ifndef BAZAAR_SERVER_DATASET_HPP
#define BAZAAR_SERVER_DATASET_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bazaar/taxation.hpp"

namespace bazaar {

/// One row of the server efficiency extract.
struct ServerDatasetRow {
    std::string provider_label;
    std::string vendor_model;
    double ssj_ops_per_watt = 0.0;
};

/// Raised on malformed dataset files; the message carries the line number.
class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Loads a CSV with header `provider,vendor_model,ssj_ops_per_watt`
/// (UTF-8, quotes optional). Rows are returned in file order. Requires
/// unique provider labels, positive efficiency values, and at least two
/// rows (min-max normalization needs a spread).
std::vector<ServerDatasetRow> load_server_dataset(const std::filesystem::path& path);

/// Same contract, parsing from an in-memory string; `origin` names the
/// source in error messages.
std::vector<ServerDatasetRow> parse_server_dataset(std::string_view text,
                                                   std::string_view origin = "dataset");

/// Computes each provider's interpolation and efficiency factor against the
/// fleet's min/max ssj_ops/watt.
EfficiencyTable build_efficiency_table(std::span<const ServerDatasetRow> rows,
                                       double eco_penalty);

}  // namespace bazaar

#endif
