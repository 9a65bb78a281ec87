#ifndef BAZAAR_SIM_HPP
#define BAZAAR_SIM_HPP

#include <span>
#include <string>
#include <vector>

#include "bazaar/market.hpp"
#include "bazaar/negotiation.hpp"
#include "bazaar/server_dataset.hpp"
#include "bazaar/taxation.hpp"

namespace bazaar {

/// Full experiment input: agent population ranges plus the tax policy.
/// Concrete agents are derived deterministically by expand_scenario.
struct ScenarioConfig {
    // consumers
    int consumer_count = 0;
    Bounds storage;           ///< per-consumer resource bounds (identical across consumers)
    Bounds ram;
    Bounds processing_power;
    double min_price = 0.0;
    Bounds max_price;         ///< demand curve: willingness to pay, linearly spaced
    double w_storage = 0.0;
    double w_ram = 0.0;
    double w_processing_power = 0.0;
    double w_price = 0.0;
    double k = 0.0;
    double beta = 1.0;

    // providers: fleet-wide price range endpoints, spread by efficiency rank
    int provider_count = 0;
    Bounds min_rp_storage;
    Bounds max_rp_storage;
    Bounds min_rp_ram;
    Bounds max_rp_ram;
    Bounds min_rp_processing_power;
    Bounds max_rp_processing_power;
    double availability_storage = 0.0;
    double availability_ram = 0.0;
    double availability_processing_power = 0.0;
    double pw_storage = 0.0;  ///< provider importance weights
    double pw_ram = 0.0;
    double pw_processing_power = 0.0;
    double irp_fraction = 0.0;
    int provider_capacity = 0;
    std::string server_dataset;  ///< path of the efficiency extract

    TaxPolicy tax = VatTax{0.0};
    bool tax_configured = false;  ///< false until a [tax] section or CLI flag sets one
    Clock t_max = 0;
    Clock round_interval = 120;
    bool record_traces = false;
};

/// Checks every type invariant for every agent the config expands to.
/// Returns the config unchanged when valid; throws ValidationError listing
/// all violations otherwise.
const ScenarioConfig& validate_scenario(const ScenarioConfig& config);

struct ConsumerAgent {
    std::string id;  ///< C1..Cn, ascending willingness to pay
    int index = 0;
    ConsumerParams params;
};

struct ProviderAgent {
    std::string id;  ///< P1..Pm, ascending energy efficiency
    int index = 0;
    ProviderParams params;
    EfficiencyEntry efficiency;
};

struct ExpandedScenario {
    std::vector<ConsumerAgent> consumers;
    std::vector<ProviderAgent> providers;
};

/// Deterministic agent construction: consumer j of N gets
/// max_price = lo + (j-1)/(N-1) * (hi-lo);  provider prices interpolate
/// between the fleet range endpoints by the provider's interpolation factor
/// (least efficient = cheapest).
ExpandedScenario expand_scenario(const ScenarioConfig& config,
                                 const EfficiencyTable& efficiency,
                                 std::span<const ServerDatasetRow> rows);

/// One offer as seen on the wire, with the tax-inclusive price the receiving
/// side decided on.
struct TraceOffer {
    Clock t = 0;
    std::string sender;
    double storage = 0.0;
    double ram = 0.0;
    double processing_power = 0.0;
    double net_price = 0.0;
    double gross_price = 0.0;
};

struct SessionTrace {
    std::string session_id;  ///< "<consumer>-<provider>"
    std::string consumer;
    std::string provider;
    SessionState final_state = SessionState::active;
    std::vector<TraceOffer> offers;
};

struct ProviderAllocation {
    std::string provider;
    int hosted = 0;
    double interpolation_factor = 0.0;
};

struct SimulationReport {
    std::vector<ProviderAllocation> allocation;  ///< one row per provider, in fleet order
    std::vector<Agreement> agreements;
    double tax_revenue = 0.0;
    double consumer_bazaar_score = 0.0;
    int consumers_served = 0;
    double hosted_weighted_interpolation = 0.0;
    std::vector<SessionTrace> traces;  ///< populated when config.record_traces
};

/// Runs the full market: every consumer negotiates with every provider in
/// parallel sessions over ticks t = 0, dt, ..., < t_max. Per tick, all active
/// sessions exchange one round, then consumers (descending willingness to
/// pay) may accept the lowest-gross offer on their table; acceptance settles
/// the agreement, cancels the consumer's other sessions, and decrements the
/// provider's capacity. Fully deterministic.
SimulationReport run_simulation(const ScenarioConfig& config,
                                std::span<const ServerDatasetRow> rows);

/// Variant with a caller-supplied efficiency table (normally derived from
/// the dataset and the policy's eco penalty; injecting one allows synthetic
/// fleets, e.g. all factors = 1 to cross-check greencloud against VAT).
SimulationReport run_simulation(const ScenarioConfig& config,
                                std::span<const ServerDatasetRow> rows,
                                const EfficiencyTable& efficiency);

/// Aggregate consumer surplus: sum over agreements of
/// (consumer max_price - gross price).
double compute_bazaar_score(std::span<const Agreement> agreements,
                            std::span<const ConsumerAgent> consumers);

/// One independent simulation per eco penalty (config must carry a
/// GreenCloud policy), ordered as given. Throws on an empty penalty list.
std::vector<std::pair<double, SimulationReport>> sweep_eco_penalty(
    const ScenarioConfig& config, std::span<const ServerDatasetRow> rows,
    std::span<const double> penalties);

}  // namespace bazaar

#endif
