#include "sideband/spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace sideband {

double variance_to_db(double v)
{
    if (!(v > 0.0)) {
        throw std::domain_error("variance_to_db: variance must be positive");
    }
    return -10.0 * std::log10(v);
}

double db_to_variance(double d)
{
    return std::pow(10.0, -d / 10.0);
}

DuanResult duan_sum(double v_sum, double v_diff)
{
    if (!(v_sum > 0.0) || !(v_diff > 0.0)) {
        throw std::domain_error("duan_sum: variances must be positive");
    }
    DuanResult r;
    r.value = v_sum + v_diff;
    r.entangled = r.value < 2.0;
    return r;
}

PhysicalityResult physicality_check(const NoiseSpectrum& s)
{
    if (s.rows() != s.cols() || s.rows() % 2 != 0) {
        throw std::invalid_argument("physicality_check: spectrum must be square over (X..,Y..) pairs");
    }
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::invalid_argument("physicality_check: spectrum must be symmetric");
    }
    const int m = static_cast<int>(s.rows()) / 2;
    Eigen::MatrixXcd h = s.cast<std::complex<double>>();
    // S + i*Sigma, Sigma = [[0, I], [-I, 0]]
    const std::complex<double> i1(0.0, 1.0);
    for (int j = 0; j < m; ++j) {
        h(j, m + j) += i1;
        h(m + j, j) -= i1;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    PhysicalityResult r;
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.pass = r.min_eigenvalue >= -1e-9;
    return r;
}

namespace {

QuadratureCombo pair_combo(int modes, int i, int j, bool y_block, double sign_j)
{
    if (modes < 1 || i < 0 || j < 0 || i >= modes || j >= modes || i == j) {
        throw std::invalid_argument("combo: mode indices out of range");
    }
    QuadratureCombo w = QuadratureCombo::Zero(2 * modes);
    const int base = y_block ? modes : 0;
    const double s = 1.0 / std::sqrt(2.0);
    w(base + i) = s;
    w(base + j) = sign_j * s;
    return w;
}

} // namespace

QuadratureCombo x_sum_combo(int modes, int i, int j)
{
    return pair_combo(modes, i, j, false, 1.0);
}

QuadratureCombo x_diff_combo(int modes, int i, int j)
{
    return pair_combo(modes, i, j, false, -1.0);
}

QuadratureCombo y_diff_combo(int modes, int i, int j)
{
    return pair_combo(modes, i, j, true, -1.0);
}

double measure_combo(const NoiseSpectrum& s, const QuadratureCombo& w)
{
    if (w.size() != s.rows()) {
        throw std::invalid_argument("measure_combo: combo references a non-sink mode");
    }
    return w.dot(s * w);
}

} // namespace sideband
