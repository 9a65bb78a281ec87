// bazaar-sim: runs one market scenario or an eco-penalty sweep and emits
// machine-readable reports (allocation/summary/laffer/welfare CSV, optional
// per-offer JSONL traces, and a run manifest).

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bazaar/config_file.hpp"
#include "bazaar/report.hpp"
#include "bazaar/server_dataset.hpp"
#include "bazaar/sim.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitSimulation = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string config_path;
    std::string servers_path;
    std::string out_dir = "out";
    std::string tax;
    std::optional<double> rate;
    std::optional<double> fee_amount;
    std::optional<double> eco_penalty;
    std::vector<double> penalties;
    std::optional<long long> dt;
    bool traces = false;
};

/// Deletes everything written so far when a command fails partway.
class OutputSet {
public:
    fs::path track(fs::path path) {
        written_.push_back(path);
        return path;
    }
    void discard() {
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    void keep() { written_.clear(); }
    ~OutputSet() { discard(); }

private:
    std::vector<fs::path> written_;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw bazaar::ConfigError("config not found: '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bazaar::TaxPolicy policy_from_flags(const Options& opt) {
    const auto need = [&](const std::optional<double>& v, const char* flag) {
        if (!v) {
            throw bazaar::ConfigError(std::string("--tax ") + opt.tax + " requires " + flag);
        }
        return *v;
    };
    if (opt.tax == "vat") {
        return bazaar::VatTax{need(opt.rate, "--rate")};
    }
    if (opt.tax == "fee") {
        return bazaar::FlatFee{need(opt.fee_amount, "--fee-amount")};
    }
    if (opt.tax == "resource") {
        bazaar::ResourceTax tax;
        tax.base = bazaar::TaxBase::processing_power;
        tax.rate_per_unit = need(opt.rate, "--rate");
        return tax;
    }
    if (opt.tax == "greencloud") {
        bazaar::GreenCloudTax tax;
        tax.rate = need(opt.rate, "--rate");
        if (opt.eco_penalty) {
            tax.eco_penalty = *opt.eco_penalty;
        } else if (!opt.penalties.empty()) {
            tax.eco_penalty = opt.penalties.front();  // sweep overrides per scenario
        } else {
            throw bazaar::ConfigError("--tax greencloud requires --eco-penalty (or --penalties)");
        }
        return tax;
    }
    throw bazaar::ConfigError("unknown --tax '" + opt.tax + "'");
}

std::string compact(double value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

std::string scenario_id(const bazaar::TaxPolicy& policy) {
    std::string id = bazaar::tax_policy_name(policy);
    if (const auto* gc = std::get_if<bazaar::GreenCloudTax>(&policy)) {
        id += "-ep" + compact(gc->eco_penalty);
    }
    return id;
}

struct LoadedScenario {
    bazaar::ScenarioConfig config;
    std::vector<bazaar::ServerDatasetRow> servers;
    std::string config_bytes;
};

LoadedScenario load(const Options& opt) {
    LoadedScenario loaded;
    loaded.config_bytes = read_file(opt.config_path);
    loaded.config = bazaar::parse_scenario_config(loaded.config_bytes, opt.config_path);

    fs::path servers = opt.servers_path;
    if (servers.empty() && !loaded.config.server_dataset.empty()) {
        // paths inside the config resolve relative to the config file
        servers = fs::path(opt.config_path).parent_path() / loaded.config.server_dataset;
    }
    if (servers.empty()) {
        throw bazaar::ConfigError("no server dataset: give --servers or a 'servers' key");
    }
    loaded.servers = bazaar::load_server_dataset(servers);

    if (!opt.tax.empty()) {
        loaded.config.tax = policy_from_flags(opt);
        loaded.config.tax_configured = true;
    }
    if (!loaded.config.tax_configured) {
        throw bazaar::ConfigError("no tax policy: give --tax or a [tax] config section");
    }
    if (opt.dt) {
        loaded.config.round_interval = *opt.dt;
    }
    loaded.config.record_traces = opt.traces;
    return loaded;
}

void write_common_outputs(const fs::path& out_dir, OutputSet& outputs,
                          std::span<const bazaar::ScenarioResult> results,
                          const LoadedScenario& loaded, const Options& opt,
                          std::span<const double> penalties) {
    bazaar::write_summary_csv(outputs.track(out_dir / "summary.csv"), results);
    bazaar::write_laffer_csv(outputs.track(out_dir / "laffer.csv"), results);
    bazaar::write_welfare_csv(outputs.track(out_dir / "welfare.csv"), results);

    bazaar::RunManifest manifest;
    manifest.config_path = opt.config_path;
    manifest.config_hash = bazaar::fnv1a_hex(loaded.config_bytes);
    manifest.tax_policy = results.empty() ? "" : results.front().tax_policy;
    manifest.penalties.assign(penalties.begin(), penalties.end());
    manifest.output_dir = out_dir.string();
    manifest.tool_version = kVersion;
    bazaar::write_manifest(outputs.track(out_dir / "manifest.json"), manifest);
}

int command_run(const Options& opt) {
    const LoadedScenario loaded = load(opt);
    const fs::path out_dir = opt.out_dir;
    fs::create_directories(out_dir);

    const bazaar::SimulationReport report =
        bazaar::run_simulation(loaded.config, loaded.servers);

    bazaar::ScenarioResult result;
    result.scenario_id = scenario_id(loaded.config.tax);
    result.tax_policy = bazaar::tax_policy_name(loaded.config.tax);
    if (const auto* gc = std::get_if<bazaar::GreenCloudTax>(&loaded.config.tax)) {
        result.eco_penalty = gc->eco_penalty;
    }
    result.report = report;

    OutputSet outputs;
    bazaar::write_allocation_csv(outputs.track(out_dir / "allocation.csv"), report);
    if (opt.traces) {
        bazaar::write_traces_jsonl(outputs.track(out_dir / "traces.jsonl"), report);
    }
    std::vector<double> penalties;
    if (const auto* gc = std::get_if<bazaar::GreenCloudTax>(&loaded.config.tax)) {
        penalties.push_back(gc->eco_penalty);
    }
    const std::vector<bazaar::ScenarioResult> results{result};
    write_common_outputs(out_dir, outputs, results, loaded, opt, penalties);
    outputs.keep();

    std::cout << "run " << result.scenario_id << ": served=" << report.consumers_served
              << " revenue=" << report.tax_revenue << " score=" << report.consumer_bazaar_score
              << " -> " << out_dir.string() << "\n";
    return kExitOk;
}

int command_sweep(const Options& opt) {
    if (opt.penalties.empty()) {
        throw bazaar::ConfigError("sweep requires --penalties");
    }
    LoadedScenario loaded = load(opt);
    if (!std::holds_alternative<bazaar::GreenCloudTax>(loaded.config.tax)) {
        throw bazaar::ConfigError("sweep requires the greencloud tax policy");
    }
    const fs::path out_dir = opt.out_dir;
    fs::create_directories(out_dir);

    const auto sweep = bazaar::sweep_eco_penalty(loaded.config, loaded.servers, opt.penalties);

    OutputSet outputs;
    std::vector<bazaar::ScenarioResult> results;
    results.reserve(sweep.size());
    for (const auto& [penalty, report] : sweep) {
        bazaar::ScenarioResult result;
        result.scenario_id = "greencloud-ep" + compact(penalty);
        result.tax_policy = "greencloud";
        result.eco_penalty = penalty;
        result.report = report;
        bazaar::write_allocation_csv(
            outputs.track(out_dir / ("allocation-ep" + compact(penalty) + ".csv")), report);
        if (opt.traces) {
            bazaar::write_traces_jsonl(
                outputs.track(out_dir / ("traces-ep" + compact(penalty) + ".jsonl")), report);
        }
        results.push_back(std::move(result));
    }
    write_common_outputs(out_dir, outputs, results, loaded, opt, opt.penalties);
    outputs.keep();

    std::cout << "sweep of " << sweep.size() << " penalties -> " << out_dir.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IaaS Bazaar market simulator with pluggable VM taxation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Options opt;
    bool sweep_mode = false;

    const auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "scenario config file")->required();
        cmd->add_option("--servers", opt.servers_path, "server efficiency CSV");
        cmd->add_option("--tax", opt.tax, "tax policy: vat|fee|resource|greencloud")
            ->check(CLI::IsMember({"vat", "fee", "resource", "greencloud"}));
        cmd->add_option("--rate", opt.rate, "tax rate (vat/greencloud) or per-unit rate (resource)");
        cmd->add_option("--fee-amount", opt.fee_amount, "lump-sum fee per agreement");
        cmd->add_option("--dt", opt.dt, "round interval in clock units");
        cmd->add_flag("--traces", opt.traces, "write per-offer traces (JSONL)");
        cmd->add_option("--out", opt.out_dir, "output directory (default: out)");
    };

    CLI::App* run = app.add_subcommand("run", "run one scenario");
    add_shared(run);
    run->add_option("--eco-penalty", opt.eco_penalty, "eco penalty for the greencloud tax");

    CLI::App* sweep = app.add_subcommand("sweep", "run one scenario per eco penalty");
    add_shared(sweep);
    sweep->add_option("--penalties", opt.penalties, "comma-separated eco penalties")
        ->delimiter(',');
    sweep->callback([&] { sweep_mode = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        return sweep_mode ? command_sweep(opt) : command_run(opt);
    } catch (const bazaar::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const bazaar::DatasetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const bazaar::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitSimulation;
    }
}
