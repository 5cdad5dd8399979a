#pragma once

// Optical elements rendered as frequency-domain transfer matrices on the
// doubled operator basis (a_1(W)..a_M(W), a_1^dag(-W)..a_M^dag(-W)).
// Every loss channel carries an explicit vacuum ancilla port so that each
// element is a complete dilation: T eta T^dag = eta with eta = diag(I, -I).

#include <complex>
#include <memory>
#include <string>

#include <Eigen/Dense>

namespace sideband {

struct BogoliubovTransfer {
    Eigen::MatrixXcd matrix; // 2*n_out x 2*n_in
    int n_in = 0;
    int n_out = 0;

    Eigen::MatrixXcd block_a() const { return matrix.topLeftCorner(n_out, n_in); }
    Eigen::MatrixXcd block_b() const { return matrix.topRightCorner(n_out, n_in); }
};

// Largest entry of |T eta T^dag - eta|; square transfers only.
double bogoliubov_defect(const BogoliubovTransfer& t);

// Action induced on quadratures (X..,Y.. ordering); real for any transfer
// with the proper doubled-basis structure.
Eigen::MatrixXd quadrature_action(const BogoliubovTransfer& t);

struct BeamSplitterParams {
    double transmissivity = 0.5;
};

struct ThreePortSample {
    double transmissivity = 0.0;
    double reflectivity = 0.0;
    double loss = 0.0;
};

struct NopaParams {
    double kappa_total = 0.0;       // total cavity amplitude decay rate, rad/s
    double escape_efficiency = 1.0; // kappa_out / kappa_total
    double pump_parameter = 0.0;    // x, threshold at 1
    double pump_phase = 0.0;        // pi = deamplification
    double excess_phase_noise = 0.0;
};

struct DetectionParams {
    double efficiency = 1.0;
};

class Element {
public:
    Element(std::string name, int inputs, int outputs)
        : name_(std::move(name)), inputs_(inputs), outputs_(outputs) {}
    virtual ~Element() = default;

    const std::string& name() const { return name_; }
    int inputs() const { return inputs_; }
    int outputs() const { return outputs_; }

    // omega: sideband angular frequency, rad/s
    virtual BogoliubovTransfer transfer(double omega) const = 0;

private:
    std::string name_;
    int inputs_;
    int outputs_;
};

using ElementPtr = std::shared_ptr<const Element>;

// ports (in = out): 0 signal, 1 open/vacuum; mode matrix [[t, r], [r, -t]]
ElementPtr beam_splitter(const BeamSplitterParams& p);

// beam splitter used as a loss channel of transmissivity tau
ElementPtr loss_channel(double tau);

// inputs (cavity_in, trans_vac, loss_vac), outputs (reflected, transmitted, loss)
ElementPtr sample_transfer(const ThreePortSample& s);

// inputs/outputs (A_1, A_2, L_1, L_2): two coupler ports, two intracavity-loss
// vacuum ports. Frequency-resolved.
ElementPtr nopa_transfer(const NopaParams& p);

// loss channel of the detection efficiency, one detected mode
ElementPtr detector_chain(const DetectionParams& p);

ElementPtr phase_shift(double theta);

} // namespace sideband
