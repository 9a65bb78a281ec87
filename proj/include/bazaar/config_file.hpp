#ifndef BAZAAR_CONFIG_FILE_HPP
#define BAZAAR_CONFIG_FILE_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bazaar/sim.hpp"

namespace bazaar {

/// Raised on malformed scenario config files; messages carry line numbers.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the flat `key = value` scenario format with [market], [consumer],
/// [provider] and optional [tax] section headers. '#' starts a comment.
ScenarioConfig parse_scenario_config(std::string_view text,
                                     std::string_view origin = "config");

/// Reads and parses a scenario config file.
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

}  // namespace bazaar

#endif
