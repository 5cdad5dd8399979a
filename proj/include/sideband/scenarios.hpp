#pragma once

// The measurement scenarios the tool exposes: source characterization,
// open-loop transmission, closed-loop EOT with coherent feedback, parameter
// sweeps, the classical cavity scan, SNL calibration, detection-efficiency
// inversion, source calibration and detuning optimization.

#include <string>
#include <vector>

#include "sideband/config.hpp"
#include "sideband/network.hpp"
#include "sideband/table.hpp"

namespace sideband {

ResultTable scenario_source(const Config& cfg);
ResultTable scenario_open_loop(const Config& cfg);
ResultTable scenario_feedback_eot(const Config& cfg);
ResultTable scenario_detuning_sweep(const Config& cfg, int jobs = 1);
ResultTable scenario_reflectivity_sweep(const Config& cfg, int jobs = 1);
ResultTable scenario_cavity_scan(const Config& cfg);
ResultTable scenario_snl(const Config& cfg);
ResultTable scenario_correct_detection(const Config& cfg);
ResultTable scenario_calibrate(const Config& cfg);
ResultTable scenario_optimize_detuning(const Config& cfg);

const std::vector<std::string>& scenario_names();

// Dispatch by CLI name; unknown names throw std::invalid_argument.
ResultTable run_scenario(const std::string& name, const Config& cfg, int jobs = 1);

// Exposed for tests: the assembled networks behind the scenarios.
Network source_network(const Config& cfg);
Network feedback_network(const Config& cfg, bool closed);
Network feedback_network_with(const Config& cfg, bool closed, double transmissivity,
                              double reflectivity, double loss, double detuning);

// Detected combo variances at the two sinks of a scenario network.
struct DetectedPair {
    double sum_variance = 1.0;  // (X1+X2)/sqrt 2
    double diff_variance = 1.0; // (Y1-Y2)/sqrt 2
};
DetectedPair measure_detected(const Network& net, double omega);

} // namespace sideband
