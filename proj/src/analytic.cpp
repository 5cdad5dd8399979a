#include "sideband/analytic.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sideband/errors.hpp"
#include "sideband/spectrum.hpp"

namespace sideband {

namespace {

void check_opo_args(double eta_esc, double x, double omega_ratio)
{
    if (!(eta_esc >= 0.0 && eta_esc <= 1.0)) {
        throw std::domain_error("opo spectrum: escape efficiency must lie in [0, 1]");
    }
    if (!(x >= 0.0 && x < 1.0)) {
        throw std::domain_error("opo spectrum: pump parameter must lie in [0, 1)");
    }
    if (!std::isfinite(omega_ratio)) {
        throw std::domain_error("opo spectrum: frequency ratio must be finite");
    }
}

double airy_denominator(double theta, double r1_sq, double r2_sq)
{
    if (!(r1_sq >= 0.0 && r1_sq <= 1.0) || !(r2_sq >= 0.0 && r2_sq <= 1.0)) {
        throw std::domain_error("airy response: power reflectivities must lie in [0, 1]");
    }
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, theta));
    return std::norm(1.0 - std::sqrt(r1_sq) * std::sqrt(r2_sq) * phase);
}

} // namespace

double opo_sum_spectrum(double eta_esc, double x, double omega_ratio)
{
    check_opo_args(eta_esc, x, omega_ratio);
    const double w = omega_ratio;
    return 1.0 - eta_esc * 4.0 * x / ((1.0 + x) * (1.0 + x) + w * w);
}

double opo_diff_spectrum(double eta_esc, double x, double omega_ratio)
{
    check_opo_args(eta_esc, x, omega_ratio);
    const double w = omega_ratio;
    return 1.0 + eta_esc * 4.0 * x / ((1.0 - x) * (1.0 - x) + w * w);
}

double open_loop_transmission(double v_db, double t)
{
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::domain_error("transmission correction: transmissivity must lie in [0, 1]");
    }
    const double v = db_to_variance(v_db);
    return variance_to_db(1.0 - t * (1.0 - v));
}

double open_loop_transmission_printed(double v_db, double t)
{
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::domain_error("transmission correction: transmissivity must lie in [0, 1]");
    }
    const double arg = 1.0 - t * db_to_variance(v_db);
    if (!(arg > 0.0)) {
        throw std::domain_error("transmission correction: printed form undefined here");
    }
    return variance_to_db(arg);
}

double detection_correction(double detected_db, double eta)
{
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("detection correction: efficiency must lie in (0, 1]");
    }
    const double v_det = db_to_variance(detected_db);
    if (!(v_det > 1.0 - eta)) {
        throw std::domain_error("unphysical detected value for stated efficiency");
    }
    return variance_to_db((v_det - (1.0 - eta)) / eta);
}

double airy_back_reflection(double theta, double r1_sq, double r2_sq)
{
    const double den = airy_denominator(theta, r1_sq, r2_sq);
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, theta));
    const double num = std::norm(-std::sqrt(r1_sq) + std::sqrt(r2_sq) * phase);
    return num / den;
}

double airy_circulating_ratio(double theta, double r1_sq, double r2_sq)
{
    return (1.0 - r1_sq) / airy_denominator(theta, r1_sq, r2_sq);
}

CalibrationResult calibrate_source(double target_sum_db, double target_diff_db,
                                   double eta_esc, double omega_ratio)
{
    check_opo_args(eta_esc, 0.0, omega_ratio);
    if (!(target_sum_db >= 0.0) || !std::isfinite(target_sum_db)) {
        throw CalibrationError("calibration: sum squeezing target must be a finite value >= 0 dB");
    }
    if (!std::isfinite(target_diff_db)) {
        throw CalibrationError("calibration: difference squeezing target must be finite");
    }

    const double w = omega_ratio;
    const double sup_var = 1.0 - eta_esc * 4.0 / (4.0 + w * w);
    const double sup_db = sup_var > 0.0 ? variance_to_db(sup_var)
                                        : std::numeric_limits<double>::infinity();
    if (!(target_sum_db < sup_db)) {
        std::ostringstream o;
        o.precision(1);
        o << std::fixed << "calibration: target " << target_sum_db
          << " dB is unreachable, the supremum at this escape efficiency and "
          << "analysis frequency is " << sup_db << " dB";
        throw CalibrationError(o.str());
    }

    CalibrationResult res;
    if (target_sum_db == 0.0) {
        res.pump_parameter = 0.0;
    } else {
        const double target_var = db_to_variance(target_sum_db);
        double lo = 0.0;
        double hi = 1.0 - 1e-15;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (opo_sum_spectrum(eta_esc, mid, w) > target_var) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        res.pump_parameter = 0.5 * (lo + hi);
    }
    const double achieved_var = opo_sum_spectrum(eta_esc, res.pump_parameter, w);
    res.achieved_sum_db = variance_to_db(achieved_var);

    const double n_ex = db_to_variance(target_diff_db) - achieved_var;
    if (n_ex < -1e-12) {
        throw CalibrationError(
            "calibration: difference target is more squeezed than the sum combo allows");
    }
    res.excess_phase_noise = std::max(0.0, n_ex);
    return res;
}

} // namespace sideband
