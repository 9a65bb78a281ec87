#include "bazaar/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace bazaar {

namespace {

ConsumerParams make_consumer_params(const ScenarioConfig& config, double max_price) {
    ConsumerParams p;
    p.storage = config.storage;
    p.ram = config.ram;
    p.processing_power = config.processing_power;
    p.price = Bounds{config.min_price, max_price};
    p.w_storage = config.w_storage;
    p.w_ram = config.w_ram;
    p.w_processing_power = config.w_processing_power;
    p.w_price = config.w_price;
    p.k = config.k;
    p.beta = config.beta;
    p.t_max = config.t_max;
    return p;
}

ProviderParams make_provider_params(const ScenarioConfig& config, double interp,
                                    ServerProfile server) {
    const auto lerp = [&](const Bounds& b) { return b.lo + interp * (b.hi - b.lo); };
    ProviderParams p;
    p.storage = ResourcePriceBand{lerp(config.min_rp_storage), lerp(config.max_rp_storage)};
    p.ram = ResourcePriceBand{lerp(config.min_rp_ram), lerp(config.max_rp_ram)};
    p.processing_power = ResourcePriceBand{lerp(config.min_rp_processing_power),
                                           lerp(config.max_rp_processing_power)};
    p.availability_storage = config.availability_storage;
    p.availability_ram = config.availability_ram;
    p.availability_processing_power = config.availability_processing_power;
    p.w_storage = config.pw_storage;
    p.w_ram = config.pw_ram;
    p.w_processing_power = config.pw_processing_power;
    p.irp_fraction = config.irp_fraction;
    p.t_max = config.t_max;
    p.capacity = config.provider_capacity;
    p.server = std::move(server);
    return p;
}

double consumer_max_price(const ScenarioConfig& config, int index_1based) {
    if (config.consumer_count <= 1) {
        return config.max_price.lo;
    }
    const double step = static_cast<double>(index_1based - 1) /
                        static_cast<double>(config.consumer_count - 1);
    return config.max_price.lo + step * (config.max_price.hi - config.max_price.lo);
}

}  // namespace

const ScenarioConfig& validate_scenario(const ScenarioConfig& config) {
    std::vector<std::string> out;
    if (config.consumer_count < 1) {
        out.push_back("scenario: consumer count must be >= 1");
    }
    if (config.provider_count < 2) {
        out.push_back("scenario: provider count must be >= 2");
    }
    if (config.t_max <= 0) {
        out.push_back("scenario: t_max must be > 0");
    }
    if (config.round_interval < 2 || config.round_interval > config.t_max) {
        out.push_back("scenario: round_interval must be in [2, t_max]");
    }
    if (config.provider_capacity < 0) {
        out.push_back("scenario: provider_capacity must be >= 0");
    }
    if (config.max_price.lo > config.max_price.hi) {
        out.push_back("scenario: max_price range endpoints must be ordered");
    }
    for (auto& msg : check_policy(config.tax)) {
        out.push_back("tax: " + msg);
    }
    // Agents are linear in the range endpoints, so endpoint agents valid
    // implies every expanded agent is valid.
    if (config.consumer_count >= 1) {
        for (int j : {1, config.consumer_count}) {
            const auto msgs = check_params(make_consumer_params(config, consumer_max_price(config, j)),
                                           "C" + std::to_string(j));
            out.insert(out.end(), msgs.begin(), msgs.end());
            if (config.consumer_count == 1) break;
        }
    }
    ServerProfile placeholder{"endpoint", "endpoint", 1.0};
    for (double interp : {0.0, 1.0}) {
        const auto msgs = check_params(make_provider_params(config, interp, placeholder),
                                       interp == 0.0 ? "provider[interp=0]" : "provider[interp=1]");
        out.insert(out.end(), msgs.begin(), msgs.end());
    }
    if (!out.empty()) {
        throw ValidationError(std::move(out));
    }
    return config;
}

ExpandedScenario expand_scenario(const ScenarioConfig& config, const EfficiencyTable& efficiency,
                                 std::span<const ServerDatasetRow> rows) {
    if (static_cast<int>(rows.size()) != config.provider_count) {
        throw ValidationError({"scenario: provider count (" +
                               std::to_string(config.provider_count) +
                               ") must match server dataset rows (" +
                               std::to_string(rows.size()) + ")"});
    }
    ExpandedScenario scenario;
    scenario.consumers.reserve(config.consumer_count);
    for (int j = 1; j <= config.consumer_count; ++j) {
        ConsumerAgent agent;
        agent.id = "C" + std::to_string(j);
        agent.index = j - 1;
        agent.params = make_consumer_params(config, consumer_max_price(config, j));
        scenario.consumers.push_back(std::move(agent));
    }
    scenario.providers.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto it = efficiency.find(rows[i].provider_label);
        if (it == efficiency.end()) {
            throw ValidationError({"scenario: provider '" + rows[i].provider_label +
                                   "' missing from efficiency table"});
        }
        ProviderAgent agent;
        agent.id = rows[i].provider_label;
        agent.index = static_cast<int>(i);
        agent.efficiency = it->second;
        agent.params = make_provider_params(
            config, it->second.interpolation_factor,
            ServerProfile{rows[i].provider_label, rows[i].vendor_model, rows[i].ssj_ops_per_watt});
        scenario.providers.push_back(std::move(agent));
    }
    // exact invariant check on every concrete agent
    std::vector<std::string> out;
    for (const auto& c : scenario.consumers) {
        const auto msgs = check_params(c.params, c.id);
        out.insert(out.end(), msgs.begin(), msgs.end());
    }
    for (const auto& p : scenario.providers) {
        const auto msgs = check_params(p.params, p.id);
        out.insert(out.end(), msgs.begin(), msgs.end());
    }
    if (!out.empty()) {
        throw ValidationError(std::move(out));
    }
    return scenario;
}

double compute_bazaar_score(std::span<const Agreement> agreements,
                            std::span<const ConsumerAgent> consumers) {
    std::unordered_map<std::string_view, double> willingness;
    willingness.reserve(consumers.size());
    for (const auto& c : consumers) {
        willingness.emplace(c.id, c.params.price.hi);
    }
    double score = 0.0;
    for (const auto& a : agreements) {
        const auto it = willingness.find(a.consumer);
        if (it == willingness.end()) {
            throw std::invalid_argument("compute_bazaar_score: unknown consumer '" + a.consumer +
                                        "'");
        }
        score += it->second - a.gross_price;
    }
    return score;
}

SimulationReport run_simulation(const ScenarioConfig& config,
                                std::span<const ServerDatasetRow> rows) {
    const double penalty = std::holds_alternative<GreenCloudTax>(config.tax)
                               ? std::get<GreenCloudTax>(config.tax).eco_penalty
                               : 0.0;
    return run_simulation(config, rows, build_efficiency_table(rows, penalty));
}

SimulationReport run_simulation(const ScenarioConfig& config,
                                std::span<const ServerDatasetRow> rows,
                                const EfficiencyTable& efficiency) {
    validate_scenario(config);
    const ExpandedScenario scenario = expand_scenario(config, efficiency, rows);
    const auto& consumers = scenario.consumers;
    const auto& providers = scenario.providers;
    const std::size_t n_consumers = consumers.size();
    const std::size_t n_providers = providers.size();

    std::vector<TaxEstimator> estimate;  // per provider
    estimate.reserve(n_providers);
    for (const auto& p : providers) {
        estimate.push_back([&config, factor = p.efficiency.efficiency_factor](
                               double net, const VmOffer& vm) {
            return compute_tax(config.tax, net, vm, factor);
        });
    }

    std::vector<NegotiationSession> sessions(n_consumers * n_providers);
    const auto session_at = [&](std::size_t c, std::size_t p) -> NegotiationSession& {
        return sessions[c * n_providers + p];
    };
    for (std::size_t c = 0; c < n_consumers; ++c) {
        for (std::size_t p = 0; p < n_providers; ++p) {
            auto& s = session_at(c, p);
            s.consumer = consumers[c].id;
            s.provider = providers[p].id;
            s.t_max = config.t_max;
        }
    }

    std::vector<int> capacity(n_providers, config.provider_capacity);
    std::vector<bool> served(n_consumers, false);

    const auto fail_provider_sessions = [&](std::size_t p) {
        for (std::size_t c = 0; c < n_consumers; ++c) {
            auto& s = session_at(c, p);
            if (s.state == SessionState::active) {
                s.state = SessionState::failed;
            }
        }
    };
    // providers with no capacity at all never negotiate
    for (std::size_t p = 0; p < n_providers; ++p) {
        if (capacity[p] <= 0) {
            fail_provider_sessions(p);
        }
    }

    // acceptance barrier order: highest willingness to pay first
    std::vector<std::size_t> barrier_order(n_consumers);
    std::iota(barrier_order.begin(), barrier_order.end(), std::size_t{0});
    std::stable_sort(barrier_order.begin(), barrier_order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return consumers[a].params.price.hi > consumers[b].params.price.hi;
                     });

    std::vector<Agreement> agreements;

    for (Clock t = 0; t < config.t_max; t += config.round_interval) {
        // round phase: every active session exchanges one round
        for (std::size_t c = 0; c < n_consumers; ++c) {
            if (served[c]) continue;
            for (std::size_t p = 0; p < n_providers; ++p) {
                auto& s = session_at(c, p);
                if (s.state == SessionState::active) {
                    advance_session_round(s, t, consumers[c].params, providers[p].params);
                }
            }
        }
        // acceptance barrier: each consumer may accept the cheapest gross
        // offer on its table, if that offer beats its own next-round plan
        for (std::size_t c : barrier_order) {
            if (served[c]) continue;
            std::size_t best_provider = n_providers;
            double best_gross = 0.0;
            for (std::size_t p = 0; p < n_providers; ++p) {
                const auto& s = session_at(c, p);
                if (s.state != SessionState::active || capacity[p] <= 0) continue;
                const VmOffer& reply = s.history.back();
                const double gross = reply.price + estimate[p](reply.price, reply);
                if (best_provider == n_providers || gross < best_gross) {
                    best_provider = p;
                    best_gross = gross;
                }
            }
            if (best_provider == n_providers) continue;
            auto& chosen = session_at(c, best_provider);
            if (!consumer_accepts(chosen.history.back(), t, config.round_interval,
                                  consumers[c].params, estimate[best_provider])) {
                continue;
            }
            chosen.state = SessionState::agreed;
            agreements.push_back(
                settle(chosen, chosen.history.back(), t, estimate[best_provider]));
            served[c] = true;
            for (std::size_t p = 0; p < n_providers; ++p) {
                auto& s = session_at(c, p);
                if (s.state == SessionState::active) {
                    s.state = SessionState::failed;
                }
            }
            if (--capacity[best_provider] == 0) {
                fail_provider_sessions(best_provider);
            }
        }
    }
    // deadline: whatever is still open fails
    for (auto& s : sessions) {
        if (s.state == SessionState::active) {
            s.state = SessionState::failed;
        }
    }

    SimulationReport report;
    report.agreements = std::move(agreements);
    report.allocation.reserve(n_providers);
    std::unordered_map<std::string_view, int> hosted;
    for (const auto& a : report.agreements) {
        ++hosted[a.provider];
    }
    double weighted = 0.0;
    for (const auto& p : providers) {
        const auto it = hosted.find(p.id);
        const int count = it == hosted.end() ? 0 : it->second;
        report.allocation.push_back(
            ProviderAllocation{p.id, count, p.efficiency.interpolation_factor});
        weighted += static_cast<double>(count) * p.efficiency.interpolation_factor;
    }
    report.consumers_served = static_cast<int>(report.agreements.size());
    report.tax_revenue = tax_revenue(report.agreements);
    report.consumer_bazaar_score = compute_bazaar_score(report.agreements, consumers);
    report.hosted_weighted_interpolation =
        report.consumers_served > 0 ? weighted / report.consumers_served : 0.0;

    if (config.record_traces) {
        report.traces.reserve(sessions.size());
        for (std::size_t c = 0; c < n_consumers; ++c) {
            for (std::size_t p = 0; p < n_providers; ++p) {
                const auto& s = session_at(c, p);
                SessionTrace trace;
                trace.session_id = s.consumer + "-" + s.provider;
                trace.consumer = s.consumer;
                trace.provider = s.provider;
                trace.final_state = s.state;
                trace.offers.reserve(s.history.size());
                for (const auto& offer : s.history) {
                    TraceOffer row;
                    row.t = offer.timestamp;
                    row.sender = offer.sender;
                    row.storage = offer.storage;
                    row.ram = offer.ram;
                    row.processing_power = offer.processing_power;
                    row.net_price = offer.price;
                    row.gross_price = offer.price + estimate[p](offer.price, offer);
                    trace.offers.push_back(std::move(row));
                }
                report.traces.push_back(std::move(trace));
            }
        }
    }
    return report;
}

std::vector<std::pair<double, SimulationReport>> sweep_eco_penalty(
    const ScenarioConfig& config, std::span<const ServerDatasetRow> rows,
    std::span<const double> penalties) {
    if (penalties.empty()) {
        throw std::invalid_argument("sweep_eco_penalty: penalty list is empty");
    }
    if (!std::holds_alternative<GreenCloudTax>(config.tax)) {
        throw std::invalid_argument("sweep_eco_penalty: scenario tax policy must be greencloud");
    }
    std::vector<std::pair<double, SimulationReport>> results;
    results.reserve(penalties.size());
    for (double penalty : penalties) {
        ScenarioConfig variant = config;
        std::get<GreenCloudTax>(variant.tax).eco_penalty = penalty;
        results.emplace_back(penalty, run_simulation(variant, rows));
    }
    return results;
}

}  // namespace bazaar
