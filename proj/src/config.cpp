#include "sideband/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sideband/errors.hpp"

namespace sideband {

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::set<std::string> kSections = {
    "nopa", "sample", "feedback", "detection", "analysis", "classical", "sweep"};

// Angle-valued keys that accept a `_deg` spelling.
const std::set<std::string> kAngleKeys = {
    "nopa.pump_phase", "feedback.detuning", "sweep.from", "sweep.to"};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out)
{
    try {
        size_t used = 0;
        out = std::stod(text, &used);
        return used == text.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_int(const std::string& text, int& out)
{
    try {
        size_t used = 0;
        out = std::stoi(text, &used);
        return used == text.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::string canonical_key(const std::string& key)
{
    if (key == "sample.transmissivity") {
        return "sample.t";
    }
    if (key == "sample.reflectivity") {
        return "sample.r";
    }
    if (key == "sample.loss") {
        return "sample.l";
    }
    return key;
}

double* double_slot(Config& cfg, const std::string& key)
{
    if (key == "nopa.kappa_total_hz") return &cfg.nopa.kappa_total_hz;
    if (key == "nopa.escape_efficiency") return &cfg.nopa.escape_efficiency;
    if (key == "nopa.pump_parameter") return &cfg.nopa.pump_parameter;
    if (key == "nopa.pump_phase") return &cfg.nopa.pump_phase;
    if (key == "nopa.excess_phase_noise") return &cfg.nopa.excess_phase_noise;
    if (key == "sample.t") return &cfg.sample.transmissivity;
    if (key == "sample.r") return &cfg.sample.reflectivity;
    if (key == "sample.l") return &cfg.sample.loss;
    if (key == "feedback.detuning") return &cfg.feedback.detuning;
    if (key == "feedback.sideband_delay_s") return &cfg.feedback.sideband_delay_s;
    if (key == "detection.efficiency") return &cfg.detection.efficiency;
    if (key == "detection.detected_db") return &cfg.detection.detected_db;
    if (key == "analysis.frequency_hz") return &cfg.analysis.frequency_hz;
    if (key == "classical.m3_power_reflectivity") return &cfg.classical.m3_power_reflectivity;
    if (key == "classical.scan_amplitude") return &cfg.classical.scan_amplitude;
    if (key == "classical.scan_period") return &cfg.classical.scan_period;
    if (key == "classical.volts_to_radians") return &cfg.classical.volts_to_radians;
    if (key == "sweep.from") return &cfg.sweep.from;
    if (key == "sweep.to") return &cfg.sweep.to;
    return nullptr;
}

bool known_numeric_key(const Config& cfg, const std::string& key)
{
    return double_slot(const_cast<Config&>(cfg), canonical_key(key)) != nullptr;
}

// Returns "" on success, a reason otherwise.
std::string set_key(Config& cfg, const std::string& raw_key, const std::string& raw_value)
{
    std::string key = canonical_key(trim(raw_key));
    const std::string value = trim(raw_value);
    double scale = 1.0;
    if (key.size() > 4 && key.compare(key.size() - 4, 4, "_deg") == 0) {
        const std::string base = key.substr(0, key.size() - 4);
        if (kAngleKeys.count(base)) {
            key = base;
            scale = kPi / 180.0;
        }
    }

    if (key == "feedback.enabled") {
        if (value == "true") {
            cfg.feedback.enabled = true;
        } else if (value == "false") {
            cfg.feedback.enabled = false;
        } else {
            return "unknown value '" + value + "' for key '" + key + "' (expected true or false)";
        }
        return "";
    }
    if (key == "sweep.parameter") {
        if (value.empty()) {
            return "empty value for key 'sweep.parameter'";
        }
        cfg.sweep.parameter = value;
        return "";
    }
    if (key == "classical.scan_samples" || key == "sweep.steps") {
        int v = 0;
        if (!parse_int(value, v)) {
            return "unknown value '" + value + "' for key '" + key + "' (expected an integer)";
        }
        (key == "sweep.steps" ? cfg.sweep.steps : cfg.classical.scan_samples) = v;
        return "";
    }
    if (double* slot = double_slot(cfg, key)) {
        double v = 0.0;
        if (!parse_double(value, v)) {
            return "unknown value '" + value + "' for key '" + key + "' (expected a number)";
        }
        *slot = v * scale;
        return "";
    }
    return "unknown key '" + key + "'";
}

std::vector<std::string> validation_failures(const Config& cfg)
{
    std::vector<std::string> bad;
    auto require = [&bad](bool ok, const std::string& msg) {
        if (!ok) {
            bad.push_back(msg);
        }
    };
    require(cfg.nopa.kappa_total_hz > 0.0,
            "nopa.kappa_total_hz: cavity bandwidth must be positive");
    require(cfg.nopa.escape_efficiency > 0.0 && cfg.nopa.escape_efficiency <= 1.0,
            "nopa.escape_efficiency: must lie in (0, 1]");
    require(cfg.nopa.pump_parameter >= 0.0 && cfg.nopa.pump_parameter < 1.0,
            "nopa.pump_parameter: must lie in [0, 1), below threshold");
    require(std::isfinite(cfg.nopa.pump_phase), "nopa.pump_phase: must be finite");
    require(cfg.nopa.excess_phase_noise >= 0.0,
            "nopa.excess_phase_noise: must be nonnegative");
    require(cfg.sample.transmissivity >= 0.0, "sample.t: must be nonnegative");
    require(cfg.sample.reflectivity >= 0.0, "sample.r: must be nonnegative");
    require(cfg.sample.loss >= 0.0 && cfg.sample.loss < 1.0,
            "sample.l: must lie in [0, 1)");
    const double budget =
        cfg.sample.transmissivity + cfg.sample.reflectivity + cfg.sample.loss;
    require(std::abs(budget - 1.0) <= 1e-9,
            "sample.t + sample.r + sample.l: port budget must equal 1 (got " +
                std::to_string(budget) + ")");
    require(std::isfinite(cfg.feedback.detuning), "feedback.detuning: must be finite");
    require(cfg.feedback.sideband_delay_s >= 0.0,
            "feedback.sideband_delay_s: must be nonnegative");
    require(cfg.detection.efficiency > 0.0 && cfg.detection.efficiency <= 1.0,
            "detection.efficiency: must lie in (0, 1]");
    require(std::isfinite(cfg.detection.detected_db),
            "detection.detected_db: must be finite");
    require(cfg.analysis.frequency_hz >= 0.0,
            "analysis.frequency_hz: must be nonnegative");
    require(cfg.classical.m3_power_reflectivity >= 0.0 &&
                cfg.classical.m3_power_reflectivity <= 1.0,
            "classical.m3_power_reflectivity: must lie in [0, 1]");
    require(cfg.classical.scan_amplitude >= 0.0,
            "classical.scan_amplitude: must be nonnegative");
    require(cfg.classical.scan_period > 0.0, "classical.scan_period: must be positive");
    require(cfg.classical.scan_samples >= 2,
            "classical.scan_samples: need at least 2 samples");
    require(known_numeric_key(cfg, cfg.sweep.parameter),
            "sweep.parameter: unknown config key '" + cfg.sweep.parameter + "'");
    require(cfg.sweep.steps >= 2, "sweep.steps: need at least 2 points");
    require(cfg.sweep.from != cfg.sweep.to, "sweep.from, sweep.to: endpoints must differ");
    return bad;
}

std::string format_g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Config parse_config(const std::string& text)
{
    Config cfg;
    std::vector<std::string> problems;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                problems.push_back("line " + std::to_string(lineno) +
                                   ": unterminated section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!kSections.count(section)) {
                problems.push_back("line " + std::to_string(lineno) +
                                   ": unknown section '" + section + "'");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) +
                               ": expected `key = value`");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            problems.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (key.find('.') == std::string::npos) {
            if (section.empty()) {
                problems.push_back("line " + std::to_string(lineno) + ": key '" + key +
                                   "' appears before any section header");
                continue;
            }
            key = section + "." + key;
        }
        const std::string err = set_key(cfg, key, value);
        if (!err.empty()) {
            problems.push_back("line " + std::to_string(lineno) + ": " + err);
        }
    }
    for (const std::string& v : validation_failures(cfg)) {
        problems.push_back(v);
    }
    if (!problems.empty()) {
        std::string msg = "invalid configuration:";
        for (const std::string& p : problems) {
            msg += "\n  " + p;
        }
        throw ConfigError(msg);
    }
    return cfg;
}

void apply_override(Config& cfg, const std::string& key, const std::string& value)
{
    const std::string err = set_key(cfg, key, value);
    if (!err.empty()) {
        throw ConfigError("override " + key + ": " + err);
    }
}

void validate_config(const Config& cfg)
{
    const std::vector<std::string> bad = validation_failures(cfg);
    if (!bad.empty()) {
        std::string msg = "invalid configuration:";
        for (const std::string& p : bad) {
            msg += "\n  " + p;
        }
        throw ConfigError(msg);
    }
}

std::string serialize_config(const Config& cfg)
{
    std::ostringstream o;
    o << "[nopa]\n"
      << "kappa_total_hz = " << format_g17(cfg.nopa.kappa_total_hz) << "\n"
      << "escape_efficiency = " << format_g17(cfg.nopa.escape_efficiency) << "\n"
      << "pump_parameter = " << format_g17(cfg.nopa.pump_parameter) << "\n"
      << "pump_phase = " << format_g17(cfg.nopa.pump_phase) << "\n"
      << "excess_phase_noise = " << format_g17(cfg.nopa.excess_phase_noise) << "\n"
      << "\n[sample]\n"
      << "t = " << format_g17(cfg.sample.transmissivity) << "\n"
      << "r = " << format_g17(cfg.sample.reflectivity) << "\n"
      << "l = " << format_g17(cfg.sample.loss) << "\n"
      << "\n[feedback]\n"
      << "enabled = " << (cfg.feedback.enabled ? "true" : "false") << "\n"
      << "detuning = " << format_g17(cfg.feedback.detuning) << "\n"
      << "sideband_delay_s = " << format_g17(cfg.feedback.sideband_delay_s) << "\n"
      << "\n[detection]\n"
      << "efficiency = " << format_g17(cfg.detection.efficiency) << "\n"
      << "detected_db = " << format_g17(cfg.detection.detected_db) << "\n"
      << "\n[analysis]\n"
      << "frequency_hz = " << format_g17(cfg.analysis.frequency_hz) << "\n"
      << "\n[classical]\n"
      << "m3_power_reflectivity = " << format_g17(cfg.classical.m3_power_reflectivity) << "\n"
      << "scan_amplitude = " << format_g17(cfg.classical.scan_amplitude) << "\n"
      << "scan_period = " << format_g17(cfg.classical.scan_period) << "\n"
      << "volts_to_radians = " << format_g17(cfg.classical.volts_to_radians) << "\n"
      << "scan_samples = " << cfg.classical.scan_samples << "\n"
      << "\n[sweep]\n"
      << "parameter = " << cfg.sweep.parameter << "\n"
      << "from = " << format_g17(cfg.sweep.from) << "\n"
      << "to = " << format_g17(cfg.sweep.to) << "\n"
      << "steps = " << cfg.sweep.steps << "\n";
    return o.str();
}

std::string config_hash(const Config& cfg)
{
    const std::string text = serialize_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double analysis_omega(const Config& cfg)
{
    return 2.0 * kPi * cfg.analysis.frequency_hz;
}

double nopa_kappa_total(const Config& cfg)
{
    return 2.0 * kPi * cfg.nopa.kappa_total_hz;
}

} // namespace sideband
