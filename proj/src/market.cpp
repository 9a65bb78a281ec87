#include "bazaar/market.hpp"

#include <cmath>
#include <sstream>

namespace bazaar {

namespace {

constexpr double kWeightTolerance = 1e-9;

std::string join(const std::vector<std::string>& messages) {
    std::ostringstream out;
    out << "validation failed (" << messages.size() << " violation"
        << (messages.size() == 1 ? "" : "s") << ")";
    for (const auto& m : messages) {
        out << "\n  - " << m;
    }
    return out.str();
}

void check_bounds(std::vector<std::string>& out, std::string_view agent, const char* field,
                  const Bounds& b) {
    if (!(b.lo < b.hi)) {
        out.push_back(std::string(agent) + ": " + field + ": min must be < max (got [" +
                      std::to_string(b.lo) + ", " + std::to_string(b.hi) + "])");
    }
}

void check_band(std::vector<std::string>& out, std::string_view agent, const char* field,
                const ResourcePriceBand& band) {
    if (!(0.0 < band.min_rp && band.min_rp < band.max_rp)) {
        out.push_back(std::string(agent) + ": " + field +
                      ": requires 0 < min_rp < max_rp (got [" + std::to_string(band.min_rp) +
                      ", " + std::to_string(band.max_rp) + "])");
    }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

std::vector<std::string> check_params(const ConsumerParams& params, std::string_view agent_id) {
    std::vector<std::string> out;
    check_bounds(out, agent_id, "storage", params.storage);
    check_bounds(out, agent_id, "ram", params.ram);
    check_bounds(out, agent_id, "processing_power", params.processing_power);
    check_bounds(out, agent_id, "price", params.price);
    const double wsum =
        params.w_storage + params.w_ram + params.w_processing_power + params.w_price;
    if (std::abs(wsum - 1.0) > kWeightTolerance) {
        out.push_back(std::string(agent_id) + ": weights sum != 1 (got " + std::to_string(wsum) +
                      ")");
    }
    if (params.k < 0.0 || params.k > 1.0) {
        out.push_back(std::string(agent_id) + ": k outside [0,1]");
    }
    if (!(params.beta > 0.0)) {
        out.push_back(std::string(agent_id) + ": beta must be > 0");
    }
    if (params.t_max <= 0) {
        out.push_back(std::string(agent_id) + ": t_max must be > 0");
    }
    return out;
}

std::vector<std::string> check_params(const ProviderParams& params, std::string_view agent_id) {
    std::vector<std::string> out;
    check_band(out, agent_id, "storage", params.storage);
    check_band(out, agent_id, "ram", params.ram);
    check_band(out, agent_id, "processing_power", params.processing_power);
    for (double a : {params.availability_storage, params.availability_ram,
                     params.availability_processing_power}) {
        if (a < 0.0 || a > 1.0) {
            out.push_back(std::string(agent_id) + ": availability outside [0,1]");
            break;
        }
    }
    const double wsum = params.w_storage + params.w_ram + params.w_processing_power;
    if (std::abs(wsum - 1.0) > kWeightTolerance) {
        out.push_back(std::string(agent_id) + ": weights sum != 1 (got " + std::to_string(wsum) +
                      ")");
    }
    if (params.irp_fraction < 0.0 || params.irp_fraction > 1.0) {
        out.push_back(std::string(agent_id) + ": irp_fraction outside [0,1]");
    }
    if (params.t_max <= 0) {
        out.push_back(std::string(agent_id) + ": t_max must be > 0");
    }
    if (params.capacity < 0) {
        out.push_back(std::string(agent_id) + ": capacity must be >= 0");
    }
    if (!(params.server.ssj_ops_per_watt > 0.0)) {
        out.push_back(std::string(agent_id) + ": server ssj_ops_per_watt must be > 0");
    }
    return out;
}

std::vector<std::string> check_offer(const VmOffer& offer, Clock session_t_max) {
    std::vector<std::string> out;
    if (!(offer.storage > 0.0) || !(offer.ram > 0.0) || !(offer.processing_power > 0.0)) {
        out.push_back(offer.sender + ": offer resource fields must be strictly positive");
    }
    if (offer.price < 0.0) {
        out.push_back(offer.sender + ": offer price must be >= 0");
    }
    if (offer.timestamp < 0 || offer.timestamp > session_t_max) {
        out.push_back(offer.sender + ": offer timestamp outside [0, t_max]");
    }
    return out;
}

}  // namespace bazaar
