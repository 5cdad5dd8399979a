#pragma once

// Directed port-graph of elements with feedback loops closed by a direct
// linear solve of (I - A) in the frequency domain.

#include <vector>

#include "sideband/elements.hpp"
#include "sideband/spectrum.hpp"

namespace sideband {

struct PortRef {
    int element = 0; // index from add_element(), or kVacuumLine
    int port = 0;

    static constexpr int kVacuumLine = -1;
};

struct Connection {
    PortRef from;
    PortRef to;
    double phase = 0.0; // carrier phase, radians
    double delay = 0.0; // propagation delay, seconds (sideband phase W*delay)
};

// Classical noise riding on a set of element output ports. quad_covariance is
// 2k x 2k over (X_p1..X_pk, Y_p1..Y_pk) in shot-noise units.
struct Injection {
    std::vector<PortRef> ports;
    Eigen::MatrixXd quad_covariance;
};

class Network {
public:
    int add_element(ElementPtr el);
    // A bare vacuum mode that can be designated as a sink directly
    // (PortRef{PortRef::kVacuumLine, index}).
    int add_vacuum_line();
    void connect(PortRef from, PortRef to, double phase = 0.0, double delay = 0.0);
    void add_sink(PortRef out);
    void add_injection(Injection inj);

    const std::vector<ElementPtr>& elements() const { return elements_; }
    const std::vector<Connection>& connections() const { return connections_; }
    const std::vector<PortRef>& sinks() const { return sinks_; }
    const std::vector<Injection>& injections() const { return injections_; }
    int vacuum_lines() const { return vacuum_lines_; }

private:
    std::vector<ElementPtr> elements_;
    std::vector<Connection> connections_;
    std::vector<PortRef> sinks_;
    std::vector<Injection> injections_;
    int vacuum_lines_ = 0;
};

struct LoopSolveResult {
    BogoliubovTransfer total_transfer; // all vacuum sources -> all sinks
    double loop_condition = 1.0;       // cond of (I - A)
    double loop_gain = 0.0;            // spectral radius of A
    NoiseSpectrum spectrum;            // at the sinks, vacuum-driven + injections
};

// Throws StructureError on bad wiring and InstabilityError when the loop has
// reached its effective oscillation threshold (spectral radius of A >= 1 or
// condition number of (I - A) beyond 1e12).
LoopSolveResult solve(const Network& net, double omega);

// Spectral radius of the loop matrix A. Shares the structural checks with
// solve() but never raises the instability error, so threshold crossings can
// be observed.
double loop_gain_margin(const Network& net, double omega);

} // namespace sideband
