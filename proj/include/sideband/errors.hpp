#pragma once

#include <stdexcept>
#include <string>

namespace sideband {

// Malformed network wiring: dangling ports, double-driven inputs, bad indices.
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The closed loop has reached (or crossed) its oscillation threshold, or the
// linear solve is too ill-conditioned to trust.
struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A calibration target cannot be reached with the given fixed parameters.
struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config file / override problems. Carries every offending key, not just the first.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sideband
