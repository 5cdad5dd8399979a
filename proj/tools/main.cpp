#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sideband/config.hpp"
#include "sideband/errors.hpp"
#include "sideband/scenarios.hpp"
#include "sideband/table.hpp"
#include "sideband/version.hpp"

namespace {

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// key=from:to:steps, routed through apply_override so _deg keys scale the same
// way they do in config files.
void apply_sweep(sideband::Config& cfg, const std::string& arg)
{
    const auto eq = arg.find('=');
    if (eq == std::string::npos) {
        throw sideband::ConfigError("--sweep expects key=from:to:steps, got '" + arg + "'");
    }
    const std::string key = arg.substr(0, eq);
    const std::string range = arg.substr(eq + 1);
    const auto c1 = range.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : range.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        range.find(':', c2 + 1) != std::string::npos) {
        throw sideband::ConfigError("--sweep expects key=from:to:steps, got '" + arg + "'");
    }
    const bool deg = ends_with(key, "_deg");
    const std::string base = deg ? key.substr(0, key.size() - 4) : key;
    sideband::apply_override(cfg, "sweep.parameter", base);
    sideband::apply_override(cfg, deg ? "sweep.from_deg" : "sweep.from",
                             range.substr(0, c1));
    sideband::apply_override(cfg, deg ? "sweep.to_deg" : "sweep.to",
                             range.substr(c1 + 1, c2 - c1 - 1));
    sideband::apply_override(cfg, "sweep.steps", range.substr(c2 + 1));
}

std::string joined_names()
{
    std::string out;
    for (const std::string& n : sideband::scenario_names()) {
        out += out.empty() ? n : ", " + n;
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Frequency-domain simulator of entangled sideband transmission "
                 "through a lossy sample under coherent feedback"};
    app.name("sideband");

    std::string scenario;
    std::string config_path;
    std::string output = "-";
    std::string sweep_arg;
    std::vector<std::string> sets;
    int jobs = 1;
    bool deterministic = false;

    app.set_version_flag("--version", std::string(sideband::kVersion));
    app.add_option("scenario", scenario, "one of: " + joined_names())->required();
    app.add_option("--config", config_path, "configuration file (sectioned key-value)");
    app.add_option("--output", output, "output CSV path, '-' for stdout")
        ->capture_default_str();
    app.add_option("--set", sets, "override one config key, key=value (repeatable)");
    app.add_option("--sweep", sweep_arg, "override the sweep section, key=from:to:steps");
    app.add_option("--jobs", jobs, "worker threads for sweep scenarios")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--deterministic", deterministic,
                 "omit the generation timestamp so identical runs are byte-identical");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto& names = sideband::scenario_names();
    if (std::find(names.begin(), names.end(), scenario) == names.end()) {
        std::cerr << "sideband: unknown scenario '" << scenario << "'\n"
                  << "  valid scenarios: " << joined_names() << "\n";
        return 2;
    }

    sideband::Config cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "sideband: cannot read config file: " << config_path << "\n";
                return 2;
            }
            std::ostringstream text;
            text << in.rdbuf();
            cfg = sideband::parse_config(text.str());
        }
        if (!sweep_arg.empty()) {
            apply_sweep(cfg, sweep_arg);
        }
        for (const std::string& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) {
                throw sideband::ConfigError("--set expects key=value, got '" + s + "'");
            }
            sideband::apply_override(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        sideband::validate_config(cfg);
    } catch (const sideband::ConfigError& e) {
        std::cerr << "sideband: " << e.what() << "\n";
        return 2;
    }

    try {
        const sideband::ResultTable table = sideband::run_scenario(scenario, cfg, jobs);
        sideband::write_csv(table, output, sideband::config_hash(cfg), deterministic);
    } catch (const std::exception& e) {
        std::cerr << "sideband: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
