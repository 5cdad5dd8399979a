#pragma once

// Sectioned key-value configuration: parsing, overrides, validation,
// canonical serialization and hashing.

#include <cstdint>
#include <string>

namespace sideband {

struct NopaConfig {
    double kappa_total_hz = 1.0e7;
    double escape_efficiency = 0.7433;
    double pump_parameter = 0.249232736604804;
    double pump_phase = 3.14159265358979323846;
    double excess_phase_noise = 0.07956320549122942;
};

struct SampleConfig {
    double transmissivity = 0.75;
    double reflectivity = 0.14;
    double loss = 0.11;
};

struct FeedbackConfig {
    bool enabled = true;
    double detuning = 0.0;          // radians
    double sideband_delay_s = 0.0;  // round-trip propagation delay
};

struct DetectionConfig {
    double efficiency = 0.7;
    double detected_db = 2.2; // input for the correct-detection scenario
};

struct AnalysisConfig {
    double frequency_hz = 2.0e6;
};

struct ClassicalConfig {
    double m3_power_reflectivity = 0.96;
    double scan_amplitude = 8.0;   // volts, triangle wave peak
    double scan_period = 0.02;     // seconds
    double volts_to_radians = 1.0;
    int scan_samples = 2001;
};

struct SweepConfig {
    std::string parameter = "feedback.detuning";
    double from = -3.14159265358979323846;
    double to = 3.14159265358979323846;
    int steps = 201;
};

struct Config {
    NopaConfig nopa;
    SampleConfig sample;
    FeedbackConfig feedback;
    DetectionConfig detection;
    AnalysisConfig analysis;
    ClassicalConfig classical;
    SweepConfig sweep;
};

// Parse a sectioned key-value document ([section] headers and/or fully dotted
// section.key lines; '#' comments). Unknown keys, bad values and invariant
// violations are all collected and thrown together as one ConfigError.
Config parse_config(const std::string& text);

// Apply one dotted key=value override (the --set path). Validation is NOT
// re-run here; call validate_config after the last override.
void apply_override(Config& cfg, const std::string& key, const std::string& value);

// Collects every violated invariant and throws ConfigError naming each key.
void validate_config(const Config& cfg);

// Canonical text form; parse(serialize(cfg)) reproduces cfg exactly.
std::string serialize_config(const Config& cfg);

// FNV-1a over the canonical serialization, as fixed-width hex.
std::string config_hash(const Config& cfg);

// Angular-frequency views (the _hz keys are ordinary frequencies).
double analysis_omega(const Config& cfg);    // rad/s
double nopa_kappa_total(const Config& cfg);  // rad/s

} // namespace sideband
