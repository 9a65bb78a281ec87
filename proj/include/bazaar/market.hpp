#ifndef BAZAAR_MARKET_HPP
#define BAZAAR_MARKET_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bazaar {

/// Simulation clock, integer ticks.
using Clock = std::int64_t;

/// Inclusive [lo, hi] interval for a negotiable characteristic.
struct Bounds {
    double lo = 0.0;
    double hi = 0.0;
};

/// A virtual machine description exchanged during negotiation.
/// Resource units: storage/ram in MB, processing power in MIPS.
/// price is the net price (excludes tax).
struct VmOffer {
    double storage = 0.0;
    double ram = 0.0;
    double processing_power = 0.0;
    double price = 0.0;
    std::string sender;
    Clock timestamp = 0;
};

/// One server type from the SPECpower_ssj2008 extract; a provider's
/// datacenter is homogeneous, so one profile per provider.
struct ServerProfile {
    std::string provider_label;
    std::string vendor_model;
    double ssj_ops_per_watt = 0.0;
};

/// Consumer-side negotiation parameters: per-characteristic bounds,
/// utility weights (sum to 1), and the concession curve (k, beta, t_max).
struct ConsumerParams {
    Bounds storage;
    Bounds ram;
    Bounds processing_power;
    Bounds price;
    double w_storage = 0.0;
    double w_ram = 0.0;
    double w_processing_power = 0.0;
    double w_price = 0.0;
    double k = 0.0;
    double beta = 1.0;
    Clock t_max = 0;
};

/// Per-resource price band: the provider concedes from min_rp toward max_rp.
struct ResourcePriceBand {
    double min_rp = 0.0;  ///< currency per resource unit at full concession
    double max_rp = 0.0;  ///< currency per resource unit at the deadline
};

/// Provider-side negotiation parameters plus capacity and server type.
struct ProviderParams {
    ResourcePriceBand storage;
    ResourcePriceBand ram;
    ResourcePriceBand processing_power;
    double availability_storage = 0.0;
    double availability_ram = 0.0;
    double availability_processing_power = 0.0;
    double w_storage = 0.0;
    double w_ram = 0.0;
    double w_processing_power = 0.0;
    double irp_fraction = 0.0;  ///< initial concession level in [0,1]; 0 starts at min_rp
    Clock t_max = 0;
    int capacity = 0;  ///< number of consumers the datacenter can host
    ServerProfile server;
};

/// A settled deal. gross_price = net_price + tax always holds.
struct Agreement {
    std::string consumer;
    std::string provider;
    VmOffer vm;
    double net_price = 0.0;
    double tax = 0.0;
    double gross_price = 0.0;
    Clock timestamp = 0;
};

/// Raised by validation entry points; carries one message per violation.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

// Per-type invariant checks. Each returns one message per violated
// invariant, prefixed with the agent id; empty means valid.
std::vector<std::string> check_params(const ConsumerParams& params, std::string_view agent_id);
std::vector<std::string> check_params(const ProviderParams& params, std::string_view agent_id);
std::vector<std::string> check_offer(const VmOffer& offer, Clock session_t_max);

}  // namespace bazaar

#endif
