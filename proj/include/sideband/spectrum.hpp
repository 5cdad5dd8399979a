#pragma once

// Quadrature noise spectra and the small arithmetic that goes with them.
// Convention: X = a + a^dag, Y = -i(a - a^dag), vacuum variance 1, so the
// shot-noise limit is exactly 1 and squeezing in dB is -10*log10(V).

#include <Eigen/Dense>

namespace sideband {

// Symmetric real matrix over (X_1..X_m, Y_1..Y_m); vacuum = identity.
using NoiseSpectrum = Eigen::MatrixXd;

// Real weight vector over the same quadrature ordering; |w| = 1 keeps the
// shot-noise reference at 1.
using QuadratureCombo = Eigen::VectorXd;

double variance_to_db(double v); // v <= 0 throws std::domain_error
double db_to_variance(double d);

struct DuanResult {
    double value = 0.0;
    bool entangled = false; // strict: value < 2
};

// v_sum = var((X1+X2)/sqrt 2), v_diff = var((Y1-Y2)/sqrt 2); both must be > 0.
DuanResult duan_sum(double v_sum, double v_diff);

struct PhysicalityResult {
    bool pass = false;
    double min_eigenvalue = 0.0;
};

// Uncertainty-principle check: min eig of S + i*Sigma >= -1e-9 with Sigma the
// symplectic form in (X..,Y..) ordering. Non-symmetric input throws.
PhysicalityResult physicality_check(const NoiseSpectrum& s);

QuadratureCombo x_sum_combo(int modes, int i, int j);  // (X_i + X_j)/sqrt 2
QuadratureCombo x_diff_combo(int modes, int i, int j); // (X_i - X_j)/sqrt 2
QuadratureCombo y_diff_combo(int modes, int i, int j); // (Y_i - Y_j)/sqrt 2

// w^T S w. Throws std::invalid_argument when the combo size does not match
// the spectrum (combo referencing a non-sink mode).
double measure_combo(const NoiseSpectrum& s, const QuadratureCombo& w);

} // namespace sideband
