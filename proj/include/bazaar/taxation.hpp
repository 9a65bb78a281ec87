#ifndef BAZAAR_TAXATION_HPP
#define BAZAAR_TAXATION_HPP

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bazaar/market.hpp"

namespace bazaar {

/// Proportional price-based tax: tax = rate * net price.
struct VatTax {
    double rate = 0.0;
};

/// Lump-sum tax, independent of the taxable base.
struct FlatFee {
    double amount = 0.0;
};

enum class TaxBase { storage, ram, processing_power };

enum class RateSchedule { proportional, progressive, regressive };

/// One step of a bracketed schedule: the rate applies to the portion of the
/// taxable base above `threshold` (up to the next bracket's threshold).
struct RateBracket {
    double threshold = 0.0;
    double rate = 0.0;
};

/// Taxes one VM resource at a per-unit rate. Progressive/regressive
/// schedules apply marginal bracket rates over the resource quantity.
struct ResourceTax {
    TaxBase base = TaxBase::processing_power;
    double rate_per_unit = 0.0;
    RateSchedule schedule = RateSchedule::proportional;
    std::vector<RateBracket> brackets;  ///< used when schedule != proportional
};

/// Combined-base tax on price and host energy efficiency:
/// tax = net price * rate * host efficiency factor.
/// Optional price_brackets make the rate progressive in the net price
/// (the bracket with the highest threshold <= price supplies the rate).
struct GreenCloudTax {
    double rate = 0.0;
    double eco_penalty = 0.0;
    std::vector<RateBracket> price_brackets;
};

using TaxPolicy = std::variant<VatTax, FlatFee, ResourceTax, GreenCloudTax>;

/// Short label for reports: "vat" | "fee" | "resource" | "greencloud".
std::string tax_policy_name(const TaxPolicy& policy);

std::vector<std::string> check_policy(const TaxPolicy& policy);

/// Min-max normalized energy efficiency of a server across the fleet:
/// 1 for the most efficient server, 0 for the least efficient.
/// Throws std::invalid_argument when ssj_min == ssj_max or ssj out of range.
double interpolation_factor(double ssj, double ssj_min, double ssj_max);

/// (1 - interpolation factor) * eco penalty; 0 for the fleet's best server.
double efficiency_factor(double interp, double eco_penalty);

/// Tax owed on one agreement under `policy`. `host_efficiency_factor` is the
/// hosting provider's efficiency factor (only the GreenCloud model reads it).
double compute_tax(const TaxPolicy& policy, double net_price, const VmOffer& vm,
                   double host_efficiency_factor);

/// Total tax collected over a set of agreements.
double tax_revenue(std::span<const Agreement> agreements);

/// |(dq/q) / (dp/p)|. Throws std::invalid_argument on dp = 0 or q, p <= 0.
double price_elasticity(double q, double dq, double p, double dp);

struct EfficiencyEntry {
    double ssj_ops_per_watt = 0.0;
    double interpolation_factor = 0.0;
    double efficiency_factor = 0.0;
};

/// Provider id -> efficiency data, computed once per scenario from the fleet.
using EfficiencyTable = std::map<std::string, EfficiencyEntry>;

}  // namespace bazaar

#endif
