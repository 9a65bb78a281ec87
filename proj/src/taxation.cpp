#include "bazaar/taxation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bazaar {

namespace {

double resource_quantity(const VmOffer& vm, TaxBase base) {
    switch (base) {
        case TaxBase::storage: return vm.storage;
        case TaxBase::ram: return vm.ram;
        case TaxBase::processing_power: return vm.processing_power;
    }
    return 0.0;
}

/// Marginal bracket sum: each bracket's rate taxes the quantity between its
/// threshold and the next one.
double bracketed_amount(double quantity, const std::vector<RateBracket>& brackets) {
    double tax = 0.0;
    for (std::size_t i = 0; i < brackets.size(); ++i) {
        const double lo = brackets[i].threshold;
        const double hi =
            (i + 1 < brackets.size()) ? brackets[i + 1].threshold : quantity;
        const double span = std::min(quantity, hi) - lo;
        if (span > 0.0) {
            tax += brackets[i].rate * span;
        }
    }
    return tax;
}

/// Rate lookup for the bracketed GreenCloud variant: the bracket with the
/// highest threshold <= value supplies the rate.
double bracket_rate(double value, const std::vector<RateBracket>& brackets, double fallback) {
    double rate = fallback;
    for (const auto& b : brackets) {
        if (value >= b.threshold) {
            rate = b.rate;
        } else {
            break;
        }
    }
    return rate;
}

void check_brackets(std::vector<std::string>& out, const std::vector<RateBracket>& brackets,
                    bool rates_increasing, const char* label) {
    if (brackets.empty()) {
        out.push_back(std::string(label) + ": bracketed schedule needs at least one bracket");
        return;
    }
    for (std::size_t i = 0; i < brackets.size(); ++i) {
        if (brackets[i].rate < 0.0) {
            out.push_back(std::string(label) + ": bracket rates must be >= 0");
        }
        if (i > 0) {
            if (!(brackets[i].threshold > brackets[i - 1].threshold)) {
                out.push_back(std::string(label) + ": bracket thresholds must strictly increase");
            }
            const bool ok = rates_increasing ? brackets[i].rate > brackets[i - 1].rate
                                             : brackets[i].rate < brackets[i - 1].rate;
            if (!ok) {
                out.push_back(std::string(label) +
                              (rates_increasing ? ": progressive rates must strictly increase"
                                                : ": regressive rates must strictly decrease"));
            }
        }
    }
}

}  // namespace

std::string tax_policy_name(const TaxPolicy& policy) {
    struct Visitor {
        std::string operator()(const VatTax&) const { return "vat"; }
        std::string operator()(const FlatFee&) const { return "fee"; }
        std::string operator()(const ResourceTax&) const { return "resource"; }
        std::string operator()(const GreenCloudTax&) const { return "greencloud"; }
    };
    return std::visit(Visitor{}, policy);
}

std::vector<std::string> check_policy(const TaxPolicy& policy) {
    std::vector<std::string> out;
    if (const auto* vat = std::get_if<VatTax>(&policy)) {
        if (vat->rate < 0.0) out.push_back("vat: rate must be >= 0");
    } else if (const auto* fee = std::get_if<FlatFee>(&policy)) {
        if (fee->amount < 0.0) out.push_back("fee: amount must be >= 0");
    } else if (const auto* res = std::get_if<ResourceTax>(&policy)) {
        if (res->rate_per_unit < 0.0) out.push_back("resource: rate_per_unit must be >= 0");
        if (res->schedule == RateSchedule::progressive) {
            check_brackets(out, res->brackets, true, "resource");
        } else if (res->schedule == RateSchedule::regressive) {
            check_brackets(out, res->brackets, false, "resource");
        }
    } else if (const auto* gc = std::get_if<GreenCloudTax>(&policy)) {
        if (gc->rate < 0.0) out.push_back("greencloud: rate must be >= 0");
        if (gc->eco_penalty < 0.0) out.push_back("greencloud: eco_penalty must be >= 0");
        if (!gc->price_brackets.empty()) {
            check_brackets(out, gc->price_brackets, true, "greencloud");
        }
    }
    return out;
}

double interpolation_factor(double ssj, double ssj_min, double ssj_max) {
    if (!(ssj_min < ssj_max)) {
        throw std::invalid_argument(
            "interpolation_factor: fleet min and max ssj_ops/watt must differ");
    }
    if (ssj < ssj_min || ssj > ssj_max) {
        throw std::invalid_argument("interpolation_factor: ssj_ops/watt outside fleet range");
    }
    return (ssj - ssj_min) / (ssj_max - ssj_min);
}

double efficiency_factor(double interp, double eco_penalty) {
    if (interp < 0.0 || interp > 1.0) {
        throw std::invalid_argument("efficiency_factor: interpolation factor outside [0,1]");
    }
    if (eco_penalty < 0.0) {
        throw std::invalid_argument("efficiency_factor: eco penalty must be >= 0");
    }
    return (1.0 - interp) * eco_penalty;
}

double compute_tax(const TaxPolicy& policy, double net_price, const VmOffer& vm,
                   double host_efficiency_factor) {
    if (net_price < 0.0) {
        throw std::invalid_argument("compute_tax: net price must be >= 0");
    }
    struct Visitor {
        double price;
        const VmOffer& vm;
        double factor;

        double operator()(const VatTax& t) const { return price * t.rate; }
        double operator()(const FlatFee& t) const { return t.amount; }
        double operator()(const ResourceTax& t) const {
            const double q = resource_quantity(vm, t.base);
            if (t.schedule == RateSchedule::proportional) {
                return t.rate_per_unit * q;
            }
            return bracketed_amount(q, t.brackets);
        }
        double operator()(const GreenCloudTax& t) const {
            const double rate = t.price_brackets.empty()
                                    ? t.rate
                                    : bracket_rate(price, t.price_brackets, t.rate);
            return price * rate * factor;
        }
    };
    return std::visit(Visitor{net_price, vm, host_efficiency_factor}, policy);
}

double tax_revenue(std::span<const Agreement> agreements) {
    double total = 0.0;
    for (const auto& a : agreements) {
        total += a.tax;
    }
    return total;
}

double price_elasticity(double q, double dq, double p, double dp) {
    if (!(q > 0.0) || !(p > 0.0)) {
        throw std::invalid_argument("price_elasticity: q and p must be > 0");
    }
    if (dp == 0.0) {
        throw std::invalid_argument("price_elasticity: dp must be nonzero");
    }
    return std::abs((dq / q) / (dp / p));
}

}  // namespace bazaar
