#pragma once

// Closed-form references: below-threshold OPO output spectra, the corrected
// transmission formula, detection-efficiency inversion, Airy responses of the
// weak compound cavity, and the source calibration built on top of them.

namespace sideband {

// S_-(W) = 1 - eta_esc*4x/((1+x)^2 + w^2), w = W/kappa_total.
// Squeezed combos (X1+X2)/sqrt2 and (Y1-Y2)/sqrt2 at pump phase pi.
double opo_sum_spectrum(double eta_esc, double x, double omega_ratio);

// S_+(W) = 1 + eta_esc*4x/((1-x)^2 + w^2), the antisqueezed partner combos.
double opo_diff_spectrum(double eta_esc, double x, double omega_ratio);

// V' = -10*lg(1 - T*(1 - 10^{-V/10})): squeezing after a transmissivity-T
// passive channel. t outside [0,1] throws.
double open_loop_transmission(double v_db, double t);

// The same expression with the inner (1 - ...) dropped, kept only so tests
// can document how far it sits from the correct form.
double open_loop_transmission_printed(double v_db, double t);

// Invert V_det = eta*V + (1 - eta). Detected variance must exceed 1 - eta.
double detection_correction(double detected_db, double eta);

// |(-r1 + r2 e^{i theta}) / (1 - r1 r2 e^{i theta})|^2 with r1 = sqrt(r1_sq),
// r2 = sqrt(r2_sq): carrier intensity at the back-reflection monitor.
double airy_back_reflection(double theta, double r1_sq, double r2_sq);

// t1^2 / |1 - r1 r2 e^{i theta}|^2 with t1^2 = 1 - r1_sq: circulating power
// as a fraction of the incident carrier power.
double airy_circulating_ratio(double theta, double r1_sq, double r2_sq);

struct CalibrationResult {
    double pump_parameter = 0.0;
    double excess_phase_noise = 0.0;
    double achieved_sum_db = 0.0;
};

// Find x by bisection on S_- (monotone in x on [0,1)) so the sum combo hits
// target_sum_db within 0.001 dB, then set N_ex = V_diff_target - V_sum.
// Unreachable targets throw CalibrationError citing the supremum.
CalibrationResult calibrate_source(double target_sum_db, double target_diff_db,
                                   double eta_esc, double omega_ratio);

} // namespace sideband
