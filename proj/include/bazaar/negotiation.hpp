#ifndef BAZAAR_NEGOTIATION_HPP
#define BAZAAR_NEGOTIATION_HPP

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "bazaar/market.hpp"

namespace bazaar {

/// Estimates the tax due on a VM at a given net price, for the provider a
/// session negotiates with. Bound to the scenario's tax policy and the
/// provider's efficiency factor.
using TaxEstimator = std::function<double(double net_price, const VmOffer& vm)>;

enum class SessionState { active, agreed, failed };

/// One consumer-provider negotiation: alternating offers starting with the
/// consumer, strictly increasing timestamps, monotone state transitions.
struct NegotiationSession {
    std::string consumer;
    std::string provider;
    std::vector<VmOffer> history;
    SessionState state = SessionState::active;
    Clock t_max = 0;
};

/// Time-dependent concession level in [0,1]:
/// k + (1-k) * (min(t, t_max)/t_max)^(1/beta). Saturates past the deadline.
double consumer_alpha(Clock t, const ConsumerParams& params);

/// The consumer's offer at time t: resources concede from max toward min,
/// price from min toward max, both driven by consumer_alpha.
VmOffer consumer_counteroffer(Clock t, const ConsumerParams& params,
                              std::string_view sender = {});

/// log(storage*w_s) + log(cpu*w_c) + log(ram*w_r) + log(max_price - price)*w_p,
/// natural log, evaluated at the gross (tax-inclusive) price. nullopt when the
/// offer is unacceptable (gross >= max_price or any log argument <= 0).
std::optional<double> consumer_utility(const VmOffer& offer, double gross_price,
                                       const ConsumerParams& params);

/// True iff the received offer's utility (gross) strictly exceeds the utility
/// of the counteroffer this consumer would send one round later (also gross).
bool consumer_accepts(const VmOffer& received, Clock t, Clock round_interval,
                      const ConsumerParams& params, const TaxEstimator& estimate_tax);

/// The two beta variants steering a provider's per-resource concession speed.
struct BetaPair {
    double resource_aware = 1.0;  ///< e^(A_i - mean A)
    double preference = 1.0;      ///< e^(1/n - w_i)
};

struct ProviderBetas {
    BetaPair storage;
    BetaPair ram;
    BetaPair processing_power;
};

ProviderBetas provider_betas(const ProviderParams& params);

/// Provider-side concession level: irp + (1-irp) * (min(t,t_max)/t_max)^(1/beta).
double provider_alpha_rp(Clock t, double beta, const ProviderParams& params);

/// Time-dependent unit price for one resource, always within its band.
double provider_resource_price(Clock t, const ResourcePriceBand& band, double beta,
                               const ProviderParams& params);

/// Prices the incoming resource vector: per resource the two beta variants
/// are averaged 50/50, then summed as unit price * quantity. Returns the
/// incoming offer with the provider's price attached.
VmOffer provider_price_offer(const VmOffer& incoming, Clock t, const ProviderParams& params,
                             std::string_view sender = {});

/// Appends one round of offers to an active session: the consumer's
/// counteroffer at t, then the provider's priced reply (stamped t+1 so
/// history timestamps stay strictly increasing). Returns the reply.
const VmOffer& advance_session_round(NegotiationSession& session, Clock t,
                                     const ConsumerParams& consumer,
                                     const ProviderParams& provider);

/// Runs one full round on a standalone session: offer exchange, then the
/// consumer's acceptance check against its next-round plan. On acceptance the
/// session becomes agreed and the Agreement is returned; at t >= t_max the
/// session fails instead.
std::optional<Agreement> run_session_round(NegotiationSession& session, Clock t,
                                           Clock round_interval,
                                           const ConsumerParams& consumer,
                                           const ProviderParams& provider,
                                           const TaxEstimator& estimate_tax);

/// Builds the agreement for an accepted provider reply.
Agreement settle(const NegotiationSession& session, const VmOffer& accepted, Clock t,
                 const TaxEstimator& estimate_tax);

}  // namespace bazaar

#endif
