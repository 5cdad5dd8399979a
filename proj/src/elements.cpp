#include "sideband/elements.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sideband {

namespace {

using Cplx = std::complex<double>;

// Frequency-flat element: a plain mode-space matrix U lifted to the doubled
// basis as [[U, 0], [0, conj(U)]]. The mirrored-frequency identity
// lower(+W) = conj(upper(-W)) reduces to element-wise conjugation here.
class StaticElement final : public Element {
public:
    StaticElement(std::string name, Eigen::MatrixXcd mode_matrix)
        : Element(std::move(name), static_cast<int>(mode_matrix.cols()),
                  static_cast<int>(mode_matrix.rows())),
          mode_(std::move(mode_matrix)) {}

    BogoliubovTransfer transfer(double) const override
    {
        const int ni = inputs();
        const int no = outputs();
        BogoliubovTransfer t;
        t.n_in = ni;
        t.n_out = no;
        t.matrix = Eigen::MatrixXcd::Zero(2 * no, 2 * ni);
        t.matrix.topLeftCorner(no, ni) = mode_;
        t.matrix.bottomRightCorner(no, ni) = mode_.conjugate();
        return t;
    }

private:
    Eigen::MatrixXcd mode_;
};

class NopaElement final : public Element {
public:
    explicit NopaElement(const NopaParams& p) : Element("nopa", 4, 4), p_(p) {}

    BogoliubovTransfer transfer(double omega) const override
    {
        Eigen::MatrixXcd au(4, 4), bu(4, 4), al(4, 4), bl(4, 4);
        blocks(omega, au, bu);
        blocks(-omega, al, bl);
        BogoliubovTransfer t;
        t.n_in = 4;
        t.n_out = 4;
        t.matrix = Eigen::MatrixXcd::Zero(8, 8);
        t.matrix.topLeftCorner(4, 4) = au;
        t.matrix.topRightCorner(4, 4) = bu;
        t.matrix.bottomLeftCorner(4, 4) = bl.conjugate();
        t.matrix.bottomRightCorner(4, 4) = al.conjugate();
        return t;
    }

private:
    // Input-output solution of
    //   (kappa + iW) a_1 = eps a_2^dag + sqrt(2 k_out) A_in1 + sqrt(2 k_loss) B_in1
    // (and 1<->2), eps = x kappa e^{i phi}, with A_out = sqrt(2 k_out) a - A_in.
    // A couples a-outs to a-ins, B couples a-outs to partner adag-ins.
    // Port order (A_1, A_2, L_1, L_2).
    void blocks(double omega, Eigen::MatrixXcd& a, Eigen::MatrixXcd& b) const
    {
        const double kappa = p_.kappa_total;
        const double ko = p_.escape_efficiency * kappa;
        const double kl = (1.0 - p_.escape_efficiency) * kappa;
        const Cplx eps = p_.pump_parameter * kappa *
                         std::exp(Cplx(0.0, p_.pump_phase));
        const Cplx d(kappa, omega);
        const Cplx det = d * d - std::norm(eps);
        const Cplx ga_o = 2.0 * ko * d / det - 1.0;
        const Cplx gb_o = 2.0 * ko * eps / det;
        const Cplx gx = std::sqrt(4.0 * ko * kl) * d / det;
        const Cplx gxb = std::sqrt(4.0 * ko * kl) * eps / det;
        const Cplx ga_l = 2.0 * kl * d / det - 1.0;
        const Cplx gb_l = 2.0 * kl * eps / det;

        a.setZero();
        b.setZero();
        a(0, 0) = ga_o; a(0, 2) = gx;
        a(1, 1) = ga_o; a(1, 3) = gx;
        a(2, 0) = gx;   a(2, 2) = ga_l;
        a(3, 1) = gx;   a(3, 3) = ga_l;
        b(0, 1) = gb_o; b(0, 3) = gxb;
        b(1, 0) = gb_o; b(1, 2) = gxb;
        b(2, 1) = gxb;  b(2, 3) = gb_l;
        b(3, 0) = gxb;  b(3, 2) = gb_l;
    }

    NopaParams p_;
};

Eigen::MatrixXcd splitter_mode_matrix(double t_power)
{
    const double t = std::sqrt(t_power);
    const double r = std::sqrt(1.0 - t_power);
    Eigen::MatrixXcd u(2, 2);
    u << t, r,
         r, -t;
    return u;
}

} // namespace

double bogoliubov_defect(const BogoliubovTransfer& t)
{
    if (t.n_in != t.n_out) {
        throw std::invalid_argument("bogoliubov_defect: transfer must be a square dilation");
    }
    const int n = t.n_in;
    Eigen::MatrixXcd eta = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    eta.topLeftCorner(n, n) = Eigen::MatrixXcd::Identity(n, n);
    eta.bottomRightCorner(n, n) = -Eigen::MatrixXcd::Identity(n, n);
    return (t.matrix * eta * t.matrix.adjoint() - eta).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd quadrature_action(const BogoliubovTransfer& t)
{
    const int ni = t.n_in;
    const int no = t.n_out;
    const Cplx i1(0.0, 1.0);
    Eigen::MatrixXcd uq_out = Eigen::MatrixXcd::Zero(2 * no, 2 * no);
    for (int j = 0; j < no; ++j) {
        uq_out(j, j) = 1.0;
        uq_out(j, no + j) = 1.0;
        uq_out(no + j, j) = -i1;
        uq_out(no + j, no + j) = i1;
    }
    Eigen::MatrixXcd vq_in = Eigen::MatrixXcd::Zero(2 * ni, 2 * ni);
    for (int j = 0; j < ni; ++j) {
        vq_in(j, j) = 0.5;
        vq_in(j, ni + j) = 0.5 * i1;
        vq_in(ni + j, j) = 0.5;
        vq_in(ni + j, ni + j) = -0.5 * i1;
    }
    return (uq_out * t.matrix * vq_in).real();
}

ElementPtr beam_splitter(const BeamSplitterParams& p)
{
    if (!(p.transmissivity >= 0.0 && p.transmissivity <= 1.0)) {
        throw std::invalid_argument("beam_splitter: transmissivity must lie in [0,1]");
    }
    return std::make_shared<StaticElement>("beam_splitter",
                                           splitter_mode_matrix(p.transmissivity));
}

ElementPtr loss_channel(double tau)
{
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw std::invalid_argument("loss_channel: transmissivity must lie in [0,1]");
    }
    return std::make_shared<StaticElement>("loss_channel", splitter_mode_matrix(tau));
}

ElementPtr sample_transfer(const ThreePortSample& s)
{
    const double t = s.transmissivity;
    const double r = s.reflectivity;
    const double l = s.loss;
    std::ostringstream bad;
    if (!(t >= 0.0) || !(r >= 0.0) || !(l >= 0.0)) {
        bad << "T, R, L must be nonnegative; ";
    }
    if (std::abs(t + r + l - 1.0) > 1e-9) {
        bad << "T + R + L must equal 1 (got " << t + r + l << "); ";
    }
    if (!bad.str().empty()) {
        throw std::invalid_argument("sample_transfer: " + bad.str());
    }
    if (l >= 1.0) {
        throw std::invalid_argument("sample_transfer: degenerate sample, L = 1 leaves no signal path");
    }
    // loss channel of transmissivity (1-L), then a splitter with T' = T/(1-L)
    const double tp = t / (1.0 - l);
    Eigen::MatrixXcd u(3, 3);
    u << std::sqrt((1.0 - tp) * (1.0 - l)), -std::sqrt(tp), std::sqrt((1.0 - tp) * l),
         std::sqrt(tp * (1.0 - l)), std::sqrt(1.0 - tp), std::sqrt(tp * l),
         std::sqrt(l), 0.0, -std::sqrt(1.0 - l);
    return std::make_shared<StaticElement>("sample", u);
}

ElementPtr nopa_transfer(const NopaParams& p)
{
    if (p.pump_parameter >= 1.0) {
        throw std::domain_error("nopa_transfer: pump parameter at or above threshold (x >= 1)");
    }
    std::ostringstream bad;
    if (!(p.pump_parameter >= 0.0)) {
        bad << "pump parameter must be nonnegative; ";
    }
    if (!(p.escape_efficiency > 0.0 && p.escape_efficiency <= 1.0)) {
        bad << "escape efficiency must lie in (0,1]; ";
    }
    if (!(p.kappa_total > 0.0)) {
        bad << "kappa_total must be positive; ";
    }
    if (!(p.excess_phase_noise >= 0.0)) {
        bad << "excess phase noise must be nonnegative; ";
    }
    if (!std::isfinite(p.pump_phase)) {
        bad << "pump phase must be finite; ";
    }
    if (!bad.str().empty()) {
        throw std::invalid_argument("nopa_transfer: " + bad.str());
    }
    return std::make_shared<NopaElement>(p);
}

ElementPtr detector_chain(const DetectionParams& p)
{
    if (!(p.efficiency > 0.0 && p.efficiency <= 1.0)) {
        throw std::invalid_argument("detector_chain: efficiency must lie in (0,1]");
    }
    return std::make_shared<StaticElement>("detector",
                                           splitter_mode_matrix(p.efficiency));
}

ElementPtr phase_shift(double theta)
{
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("phase_shift: theta must be finite");
    }
    Eigen::MatrixXcd u(1, 1);
    u(0, 0) = std::exp(Cplx(0.0, theta));
    return std::make_shared<StaticElement>("phase_shift", u);
}

} // namespace sideband
