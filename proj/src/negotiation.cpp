#include "bazaar/negotiation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bazaar {

namespace {

double concession(Clock t, Clock t_max, double start, double beta) {
    const double ratio =
        static_cast<double>(std::min(t, t_max)) / static_cast<double>(t_max);
    return start + (1.0 - start) * std::pow(ratio, 1.0 / beta);
}

}  // namespace

double consumer_alpha(Clock t, const ConsumerParams& params) {
    if (t < 0) {
        throw std::invalid_argument("consumer_alpha: t must be >= 0");
    }
    const double a = concession(t, params.t_max, params.k, params.beta);
    return std::clamp(a, 0.0, 1.0);
}

VmOffer consumer_counteroffer(Clock t, const ConsumerParams& params, std::string_view sender) {
    const double a = consumer_alpha(t, params);
    VmOffer offer;
    // utility increases with resources: concede from max down to min
    offer.storage = params.storage.lo + (1.0 - a) * (params.storage.hi - params.storage.lo);
    offer.ram = params.ram.lo + (1.0 - a) * (params.ram.hi - params.ram.lo);
    offer.processing_power =
        params.processing_power.lo + (1.0 - a) * (params.processing_power.hi - params.processing_power.lo);
    // utility decreases with price: concede from min up to max
    offer.price = params.price.lo + a * (params.price.hi - params.price.lo);
    offer.sender = std::string(sender);
    offer.timestamp = t;
    return offer;
}

std::optional<double> consumer_utility(const VmOffer& offer, double gross_price,
                                       const ConsumerParams& params) {
    const double headroom = params.price.hi - gross_price;
    const double s = offer.storage * params.w_storage;
    const double c = offer.processing_power * params.w_processing_power;
    const double r = offer.ram * params.w_ram;
    if (headroom <= 0.0 || s <= 0.0 || c <= 0.0 || r <= 0.0) {
        return std::nullopt;
    }
    return std::log(s) + std::log(c) + std::log(r) + std::log(headroom) * params.w_price;
}

bool consumer_accepts(const VmOffer& received, Clock t, Clock round_interval,
                      const ConsumerParams& params, const TaxEstimator& estimate_tax) {
    const double received_gross = received.price + estimate_tax(received.price, received);
    const auto u_received = consumer_utility(received, received_gross, params);
    if (!u_received) {
        return false;
    }
    const VmOffer planned = consumer_counteroffer(t + round_interval, params);
    const double planned_gross = planned.price + estimate_tax(planned.price, planned);
    const auto u_planned = consumer_utility(planned, planned_gross, params);
    return !u_planned || *u_received > *u_planned;
}

ProviderBetas provider_betas(const ProviderParams& params) {
    const double mean = (params.availability_storage + params.availability_ram +
                         params.availability_processing_power) /
                        3.0;
    constexpr double kResourceCount = 3.0;
    ProviderBetas betas;
    betas.storage.resource_aware = std::exp(params.availability_storage - mean);
    betas.ram.resource_aware = std::exp(params.availability_ram - mean);
    betas.processing_power.resource_aware = std::exp(params.availability_processing_power - mean);
    betas.storage.preference = std::exp(1.0 / kResourceCount - params.w_storage);
    betas.ram.preference = std::exp(1.0 / kResourceCount - params.w_ram);
    betas.processing_power.preference = std::exp(1.0 / kResourceCount - params.w_processing_power);
    return betas;
}

double provider_alpha_rp(Clock t, double beta, const ProviderParams& params) {
    if (t < 0) {
        throw std::invalid_argument("provider_alpha_rp: t must be >= 0");
    }
    if (!(beta > 0.0)) {
        throw std::invalid_argument("provider_alpha_rp: beta must be > 0");
    }
    return concession(t, params.t_max, params.irp_fraction, beta);
}

double provider_resource_price(Clock t, const ResourcePriceBand& band, double beta,
                               const ProviderParams& params) {
    const double alpha = provider_alpha_rp(t, beta, params);
    return band.min_rp + alpha * (band.max_rp - band.min_rp);
}

VmOffer provider_price_offer(const VmOffer& incoming, Clock t, const ProviderParams& params,
                             std::string_view sender) {
    const ProviderBetas betas = provider_betas(params);
    const auto unit_price = [&](const ResourcePriceBand& band, const BetaPair& beta) {
        return 0.5 * provider_resource_price(t, band, beta.resource_aware, params) +
               0.5 * provider_resource_price(t, band, beta.preference, params);
    };
    VmOffer reply = incoming;
    reply.price = unit_price(params.storage, betas.storage) * incoming.storage +
                  unit_price(params.ram, betas.ram) * incoming.ram +
                  unit_price(params.processing_power, betas.processing_power) *
                      incoming.processing_power;
    reply.sender = std::string(sender);
    reply.timestamp = t;
    return reply;
}

const VmOffer& advance_session_round(NegotiationSession& session, Clock t,
                                     const ConsumerParams& consumer,
                                     const ProviderParams& provider) {
    VmOffer ask = consumer_counteroffer(t, consumer, session.consumer);
    VmOffer reply = provider_price_offer(ask, t, provider, session.provider);
    reply.timestamp = t + 1;  // keeps history timestamps strictly increasing
    session.history.push_back(std::move(ask));
    session.history.push_back(std::move(reply));
    return session.history.back();
}

Agreement settle(const NegotiationSession& session, const VmOffer& accepted, Clock t,
                 const TaxEstimator& estimate_tax) {
    Agreement agreement;
    agreement.consumer = session.consumer;
    agreement.provider = session.provider;
    agreement.vm = accepted;
    agreement.net_price = accepted.price;
    agreement.tax = estimate_tax(accepted.price, accepted);
    agreement.gross_price = agreement.net_price + agreement.tax;
    agreement.timestamp = t;
    return agreement;
}

std::optional<Agreement> run_session_round(NegotiationSession& session, Clock t,
                                           Clock round_interval,
                                           const ConsumerParams& consumer,
                                           const ProviderParams& provider,
                                           const TaxEstimator& estimate_tax) {
    if (session.state != SessionState::active) {
        return std::nullopt;
    }
    if (t >= session.t_max) {
        session.state = SessionState::failed;
        return std::nullopt;
    }
    const VmOffer& reply = advance_session_round(session, t, consumer, provider);
    if (consumer_accepts(reply, t, round_interval, consumer, estimate_tax)) {
        session.state = SessionState::agreed;
        return settle(session, reply, t, estimate_tax);
    }
    return std::nullopt;
}

}  // namespace bazaar
