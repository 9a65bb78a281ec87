#include "bazaar/config_file.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace bazaar {

namespace {

struct Entry {
    std::string value;
    std::size_t lineno = 0;
};

using Section = std::map<std::string, Entry, std::less<>>;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void fail(std::string_view origin, std::size_t lineno, const std::string& what) {
    std::ostringstream err;
    err << origin << ":" << lineno << ": " << what;
    throw ConfigError(err.str());
}

class Parsed {
public:
    Parsed(std::string_view text, std::string_view origin) : origin_(origin) {
        std::istringstream stream{std::string(text)};
        std::string line;
        std::size_t lineno = 0;
        std::string section;
        while (std::getline(stream, line)) {
            ++lineno;
            std::string_view s = trim(line);
            if (const auto hash = s.find('#'); hash != std::string_view::npos) {
                s = trim(s.substr(0, hash));
            }
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']' || s.size() < 3) {
                    fail(origin_, lineno, "malformed section header");
                }
                section = std::string(trim(s.substr(1, s.size() - 2)));
                if (section != "market" && section != "consumer" && section != "provider" &&
                    section != "tax") {
                    fail(origin_, lineno, "unknown section [" + section + "]");
                }
                sections_.try_emplace(section);
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string_view::npos) {
                fail(origin_, lineno, "expected 'key = value'");
            }
            if (section.empty()) {
                fail(origin_, lineno, "key outside any section");
            }
            const std::string key{trim(s.substr(0, eq))};
            const std::string value{trim(s.substr(eq + 1))};
            if (key.empty() || value.empty()) {
                fail(origin_, lineno, "empty key or value");
            }
            auto [it, inserted] = sections_[section].try_emplace(key, Entry{value, lineno});
            if (!inserted) {
                fail(origin_, lineno,
                     "duplicate key '" + key + "' (first at line " +
                         std::to_string(it->second.lineno) + ")");
            }
        }
    }

    bool has(std::string_view section, std::string_view key) const {
        const auto s = sections_.find(std::string(section));
        return s != sections_.end() && s->second.find(key) != s->second.end();
    }

    bool has_section(std::string_view section) const {
        return sections_.find(std::string(section)) != sections_.end();
    }

    const Entry& get(std::string_view section, std::string_view key) const {
        const auto s = sections_.find(std::string(section));
        if (s == sections_.end()) {
            throw ConfigError(std::string(origin_) + ": missing section [" +
                              std::string(section) + "]");
        }
        const auto it = s->second.find(key);
        if (it == s->second.end()) {
            throw ConfigError(std::string(origin_) + ": missing key '" + std::string(key) +
                              "' in section [" + std::string(section) + "]");
        }
        return it->second;
    }

    double number(std::string_view section, std::string_view key) const {
        const Entry& e = get(section, key);
        double out = 0.0;
        const auto* begin = e.value.data();
        const auto* end = begin + e.value.size();
        const auto [ptr, ec] = std::from_chars(begin, end, out);
        if (ec != std::errc{} || ptr != end) {
            fail(origin_, e.lineno, "cannot parse number '" + e.value + "' for key '" +
                                        std::string(key) + "'");
        }
        return out;
    }

    double number_or(std::string_view section, std::string_view key, double fallback) const {
        return has(section, key) ? number(section, key) : fallback;
    }

    long long integer(std::string_view section, std::string_view key) const {
        const Entry& e = get(section, key);
        long long out = 0;
        const auto* begin = e.value.data();
        const auto* end = begin + e.value.size();
        const auto [ptr, ec] = std::from_chars(begin, end, out);
        if (ec != std::errc{} || ptr != end) {
            fail(origin_, e.lineno, "cannot parse integer '" + e.value + "' for key '" +
                                        std::string(key) + "'");
        }
        return out;
    }

    std::string text(std::string_view section, std::string_view key) const {
        return get(section, key).value;
    }

    std::string_view origin() const { return origin_; }

    [[noreturn]] void fail_at(std::string_view section, std::string_view key,
                              const std::string& what) const {
        fail(origin_, get(section, key).lineno, what);
    }

private:
    std::string origin_;
    std::map<std::string, Section, std::less<>> sections_;
};

std::vector<RateBracket> parse_brackets(const Parsed& p, std::string_view key) {
    // "threshold:rate,threshold:rate,..."
    const std::string spec = p.text("tax", key);
    std::vector<RateBracket> brackets;
    std::istringstream stream(spec);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            p.fail_at("tax", key, "bracket entries must be 'threshold:rate'");
        }
        RateBracket b;
        try {
            b.threshold = std::stod(item.substr(0, colon));
            b.rate = std::stod(item.substr(colon + 1));
        } catch (const std::exception&) {
            p.fail_at("tax", key, "cannot parse bracket entry '" + item + "'");
        }
        brackets.push_back(b);
    }
    if (brackets.empty()) {
        p.fail_at("tax", key, "empty bracket list");
    }
    return brackets;
}

TaxBase parse_tax_base(const Parsed& p, const std::string& name) {
    if (name == "storage") return TaxBase::storage;
    if (name == "ram") return TaxBase::ram;
    if (name == "processing_power") return TaxBase::processing_power;
    p.fail_at("tax", "base", "unknown taxable base '" + name + "'");
}

TaxPolicy parse_tax_section(const Parsed& p) {
    const std::string policy = p.text("tax", "policy");
    if (policy == "vat") {
        return VatTax{p.number("tax", "rate")};
    }
    if (policy == "fee") {
        return FlatFee{p.number("tax", "amount")};
    }
    if (policy == "resource") {
        ResourceTax tax;
        tax.base = parse_tax_base(p, p.text("tax", "base"));
        tax.rate_per_unit = p.number_or("tax", "rate_per_unit", 0.0);
        const std::string schedule =
            p.has("tax", "schedule") ? p.text("tax", "schedule") : "proportional";
        if (schedule == "proportional") {
            tax.schedule = RateSchedule::proportional;
            if (!p.has("tax", "rate_per_unit")) {
                p.fail_at("tax", "policy", "proportional resource tax needs rate_per_unit");
            }
        } else if (schedule == "progressive" || schedule == "regressive") {
            tax.schedule = schedule == "progressive" ? RateSchedule::progressive
                                                     : RateSchedule::regressive;
            tax.brackets = parse_brackets(p, "brackets");
        } else {
            p.fail_at("tax", "schedule", "unknown schedule '" + schedule + "'");
        }
        return tax;
    }
    if (policy == "greencloud") {
        GreenCloudTax tax;
        tax.rate = p.number("tax", "rate");
        tax.eco_penalty = p.number("tax", "eco_penalty");
        if (p.has("tax", "price_brackets")) {
            tax.price_brackets = parse_brackets(p, "price_brackets");
        }
        return tax;
    }
    p.fail_at("tax", "policy", "unknown tax policy '" + policy + "'");
}

}  // namespace

ScenarioConfig parse_scenario_config(std::string_view text, std::string_view origin) {
    const Parsed p(text, origin);
    ScenarioConfig config;

    config.consumer_count = static_cast<int>(p.integer("market", "consumers"));
    config.provider_count = static_cast<int>(p.integer("market", "providers"));
    config.provider_capacity = static_cast<int>(p.integer("market", "provider_capacity"));
    config.round_interval = p.has("market", "round_interval")
                                ? static_cast<Clock>(p.integer("market", "round_interval"))
                                : Clock{120};
    if (p.has("market", "servers")) {
        config.server_dataset = p.text("market", "servers");
    }

    config.w_ram = p.number("consumer", "w_ram");
    config.w_storage = p.number("consumer", "w_storage");
    config.w_processing_power = p.number("consumer", "w_processing_power");
    config.w_price = p.number("consumer", "w_price");
    config.ram = Bounds{p.number("consumer", "min_ram"), p.number("consumer", "max_ram")};
    config.processing_power = Bounds{p.number("consumer", "min_processing_power"),
                                     p.number("consumer", "max_processing_power")};
    config.storage =
        Bounds{p.number("consumer", "min_storage"), p.number("consumer", "max_storage")};
    config.min_price = p.number("consumer", "min_price");
    config.max_price =
        Bounds{p.number("consumer", "max_price_low"), p.number("consumer", "max_price_high")};
    config.k = p.number_or("consumer", "k", 0.0);
    config.beta = p.number("consumer", "beta");

    config.availability_ram = p.number("provider", "availability_ram");
    config.availability_storage = p.number("provider", "availability_storage");
    config.availability_processing_power = p.number("provider", "availability_processing_power");
    config.pw_ram = p.number("provider", "w_ram");
    config.pw_storage = p.number("provider", "w_storage");
    config.pw_processing_power = p.number("provider", "w_processing_power");
    config.min_rp_storage = Bounds{p.number("provider", "min_rp_storage_low"),
                                   p.number("provider", "min_rp_storage_high")};
    config.max_rp_storage = Bounds{p.number("provider", "max_rp_storage_low"),
                                   p.number("provider", "max_rp_storage_high")};
    config.min_rp_ram =
        Bounds{p.number("provider", "min_rp_ram_low"), p.number("provider", "min_rp_ram_high")};
    config.max_rp_ram =
        Bounds{p.number("provider", "max_rp_ram_low"), p.number("provider", "max_rp_ram_high")};
    config.min_rp_processing_power = Bounds{p.number("provider", "min_rp_processing_power_low"),
                                            p.number("provider", "min_rp_processing_power_high")};
    config.max_rp_processing_power = Bounds{p.number("provider", "max_rp_processing_power_low"),
                                            p.number("provider", "max_rp_processing_power_high")};
    config.irp_fraction = p.number_or("provider", "irp_fraction", 0.0);

    // t_max may appear in any of the three agent sections but must agree
    Clock t_max = 0;
    bool have_t_max = false;
    for (const char* section : {"market", "consumer", "provider"}) {
        if (p.has(section, "t_max")) {
            const Clock value = static_cast<Clock>(p.integer(section, "t_max"));
            if (have_t_max && value != t_max) {
                throw ConfigError(std::string(origin) + ": conflicting t_max values");
            }
            t_max = value;
            have_t_max = true;
        }
    }
    if (!have_t_max) {
        throw ConfigError(std::string(origin) + ": missing key 't_max'");
    }
    config.t_max = t_max;

    if (p.has_section("tax")) {
        config.tax = parse_tax_section(p);
        config.tax_configured = true;
    }
    return config;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("config not found: '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_config(buf.str(), path.string());
}

}  // namespace bazaar
