#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "sideband/analytic.hpp"
#include "sideband/config.hpp"
#include "sideband/errors.hpp"
#include "sideband/scenarios.hpp"
#include "sideband/spectrum.hpp"

using namespace sideband;

namespace {

constexpr double kPi = 3.14159265358979323846;

double cell(const ResultTable& t, int row, const std::string& column)
{
    for (size_t c = 0; c < t.columns.size(); ++c) {
        if (t.columns[c] == column) {
            return t.rows.at(row).at(c);
        }
    }
    throw std::out_of_range("no column " + column);
}

} // namespace

TEST_CASE("source scenario") {
    const Config cfg;
    const ResultTable t = scenario_source(cfg);
    REQUIRE(t.rows.size() == 1);
    CHECK(cell(t, 0, "sum_db") == doctest::Approx(2.70).epsilon(0.02));
    CHECK(cell(t, 0, "diff_db") == doctest::Approx(2.10).epsilon(0.025));
    CHECK(std::abs(cell(t, 0, "sum_db") - 2.70) < 0.05);
    CHECK(std::abs(cell(t, 0, "diff_db") - 2.10) < 0.05);
    CHECK(cell(t, 0, "duan") == doctest::Approx(1.1536267982317348).epsilon(1e-9));
    CHECK(cell(t, 0, "duan") < 2.0);

    SUBCASE("blocked pump is the shot-noise limit") {
        Config off = cfg;
        off.nopa.pump_parameter = 0.0;
        off.nopa.excess_phase_noise = 0.0;
        const ResultTable r = scenario_source(off);
        CHECK(std::abs(cell(r, 0, "sum_db")) < 1e-9);
        CHECK(std::abs(cell(r, 0, "diff_db")) < 1e-9);
        CHECK(cell(r, 0, "duan") == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("without excess noise the two combos coincide") {
        Config clean = cfg;
        clean.nopa.excess_phase_noise = 0.0;
        const ResultTable r = scenario_source(clean);
        CHECK(cell(r, 0, "sum_db") == doctest::Approx(cell(r, 0, "diff_db")).epsilon(1e-12));
    }
    SUBCASE("detection-corrected value is efficiency independent") {
        Config weak = cfg;
        weak.detection.efficiency = 0.4;
        const ResultTable r = scenario_source(weak);
        CHECK(cell(r, 0, "sum_db") == doctest::Approx(cell(t, 0, "sum_db")).epsilon(1e-9));
    }
}

TEST_CASE("open-loop scenario matches the corrected transmission formula") {
    const Config cfg;
    const ResultTable t = scenario_open_loop(cfg);
    REQUIRE(t.rows.size() == 1);
    CHECK(cell(t, 0, "transmissivity") == doctest::Approx(0.75));
    CHECK(cell(t, 0, "sum_db") == doctest::Approx(1.8523725347372069).epsilon(1e-9));
    CHECK(cell(t, 0, "diff_db") == doctest::Approx(1.4724789427042937).epsilon(1e-9));
    CHECK(cell(t, 0, "sum_db") ==
          doctest::Approx(open_loop_transmission(cell(t, 0, "input_sum_db"), 0.75))
              .epsilon(1e-9));
    CHECK(cell(t, 0, "duan") < 2.0);

    SUBCASE("network equals formula over random source and sample settings") {
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            Config c;
            c.nopa.escape_efficiency = 0.2 + 0.8 * uni(rng);
            c.nopa.pump_parameter = 0.85 * uni(rng);
            c.nopa.excess_phase_noise = 0.2 * uni(rng);
            c.detection.efficiency = 1.0;
            c.sample.loss = 0.3 * uni(rng);
            c.sample.reflectivity = (1.0 - c.sample.loss) * uni(rng) * 0.9;
            c.sample.transmissivity = 1.0 - c.sample.loss - c.sample.reflectivity;
            const ResultTable r = scenario_open_loop(c);
            const double expect_sum =
                open_loop_transmission(cell(r, 0, "input_sum_db"), c.sample.transmissivity);
            const double expect_diff =
                open_loop_transmission(cell(r, 0, "input_diff_db"), c.sample.transmissivity);
            CHECK(std::abs(cell(r, 0, "sum_db") - expect_sum) < 1e-9);
            CHECK(std::abs(cell(r, 0, "diff_db") - expect_diff) < 1e-9);
        }
    }
}

TEST_CASE("feedback-eot scenario") {
    const Config cfg;
    const ResultTable t = scenario_feedback_eot(cfg);
    REQUIRE(t.columns == std::vector<std::string>{"sum_db", "diff_db", "duan",
                                                  "enhancement_db"});
    REQUIRE(t.rows.size() == 1);
    CHECK(cell(t, 0, "enhancement_db") ==
          doctest::Approx(0.3000591763955951).epsilon(1e-9));
    CHECK(std::abs(cell(t, 0, "enhancement_db") - 0.3) < 0.15);
    CHECK(cell(t, 0, "sum_db") == doctest::Approx(2.1524317111327989).epsilon(1e-9));
    CHECK(cell(t, 0, "diff_db") == doctest::Approx(1.6982387737992433).epsilon(1e-9));
    CHECK(cell(t, 0, "duan") == doctest::Approx(1.2855529074141683).epsilon(1e-9));
    CHECK(cell(t, 0, "duan") < 2.0);

    SUBCASE("nothing to feed back at zero reflectivity") {
        Config c = cfg;
        c.sample.reflectivity = 0.0;
        c.sample.transmissivity = 0.89;
        const ResultTable r = scenario_feedback_eot(c);
        CHECK(std::abs(cell(r, 0, "enhancement_db")) < 1e-12);
    }
    SUBCASE("feedback disabled reports no enhancement") {
        Config c = cfg;
        c.feedback.enabled = false;
        const ResultTable r = scenario_feedback_eot(c);
        CHECK(std::abs(cell(r, 0, "enhancement_db")) < 1e-12);
        CHECK(cell(r, 0, "sum_db") ==
              doctest::Approx(open_loop_transmission(2.7, 0.75)).epsilon(1e-6));
    }
    SUBCASE("resonant feedback beats the anti-resonant loop") {
        Config pi_detuned = cfg;
        pi_detuned.feedback.detuning = kPi;
        const ResultTable r = scenario_feedback_eot(pi_detuned);
        CHECK(cell(t, 0, "sum_db") > cell(r, 0, "sum_db"));
    }
    SUBCASE("matches the zero-reflectivity open-loop scenario") {
        Config c = cfg;
        c.sample.reflectivity = 0.0;
        c.sample.transmissivity = 0.89;
        const ResultTable fb = scenario_feedback_eot(c);
        const ResultTable ol = scenario_open_loop(c);
        CHECK(std::abs(cell(fb, 0, "sum_db") - cell(ol, 0, "sum_db")) < 1e-9);
        CHECK(std::abs(cell(fb, 0, "diff_db") - cell(ol, 0, "diff_db")) < 1e-9);
    }
}

TEST_CASE("detuning sweep") {
    const Config cfg;
    const ResultTable t = scenario_detuning_sweep(cfg, 2);
    REQUIRE(t.rows.size() == 201);
    REQUIRE(t.columns == std::vector<std::string>{"theta", "d2_intensity", "sum_db"});
    CHECK(cell(t, 0, "theta") == doctest::Approx(-kPi));
    CHECK(cell(t, 200, "theta") == doctest::Approx(kPi));

    int mid = 100;
    CHECK(cell(t, mid, "theta") == doctest::Approx(0.0));
    SUBCASE("monitor intensity bottoms out on resonance, squeezing peaks there") {
        for (int i = 0; i < 201; ++i) {
            if (i == mid) continue;
            CHECK(cell(t, i, "d2_intensity") > cell(t, mid, "d2_intensity"));
            CHECK(cell(t, i, "sum_db") < cell(t, mid, "sum_db"));
        }
        CHECK(cell(t, mid, "d2_intensity") == doctest::Approx(0.9142546398838493).epsilon(1e-9));
        CHECK(cell(t, 0, "d2_intensity") == doctest::Approx(0.9815807576991846).epsilon(1e-9));
    }
    SUBCASE("both curves are even in the detuning") {
        for (int i = 0; i < 201; ++i) {
            CHECK(cell(t, i, "d2_intensity") ==
                  doctest::Approx(cell(t, 200 - i, "d2_intensity")).epsilon(1e-9));
            CHECK(cell(t, i, "sum_db") ==
                  doctest::Approx(cell(t, 200 - i, "sum_db")).epsilon(1e-9));
        }
    }
    SUBCASE("sweep section override is honored") {
        Config c = cfg;
        c.sweep.parameter = "feedback.detuning";
        c.sweep.from = -1.0;
        c.sweep.to = 1.0;
        c.sweep.steps = 5;
        const ResultTable r = scenario_detuning_sweep(c, 1);
        REQUIRE(r.rows.size() == 5);
        CHECK(cell(r, 0, "theta") == doctest::Approx(-1.0));
        CHECK(cell(r, 4, "theta") == doctest::Approx(1.0));
    }
    SUBCASE("jobs do not change the rows") {
        const ResultTable serial = scenario_detuning_sweep(cfg, 1);
        const ResultTable parallel = scenario_detuning_sweep(cfg, 8);
        REQUIRE(serial.rows.size() == parallel.rows.size());
        for (size_t i = 0; i < serial.rows.size(); ++i) {
            for (size_t c = 0; c < serial.columns.size(); ++c) {
                CHECK(serial.rows[i][c] == parallel.rows[i][c]);
            }
        }
    }
}

TEST_CASE("reflectivity sweep") {
    const Config cfg;
    const ResultTable t = scenario_reflectivity_sweep(cfg, 2);
    REQUIRE(t.rows.size() == 16);
    CHECK(cell(t, 0, "reflectivity") == doctest::Approx(0.05));
    CHECK(cell(t, 15, "reflectivity") == doctest::Approx(0.20));

    SUBCASE("feedback never hurts on resonance") {
        for (int i = 0; i < 16; ++i) {
            CHECK(cell(t, i, "sum_db_feedback_on") >= cell(t, i, "sum_db_feedback_off"));
        }
    }
    SUBCASE("published design point") {
        int i14 = -1;
        for (int i = 0; i < 16; ++i) {
            if (std::abs(cell(t, i, "reflectivity") - 0.14) < 1e-12) {
                i14 = i;
            }
        }
        REQUIRE(i14 >= 0);
        const double gap =
            cell(t, i14, "sum_db_feedback_on") - cell(t, i14, "sum_db_feedback_off");
        CHECK(gap == doctest::Approx(0.30005917639558755).epsilon(1e-9));
    }
    SUBCASE("higher reflectivity widens the gap between the quoted operating points") {
        Config c = cfg;
        c.sweep.parameter = "sample.r";
        c.sweep.from = 0.14;
        c.sweep.to = 0.30;
        c.sweep.steps = 2;
        const ResultTable r = scenario_reflectivity_sweep(c, 1);
        const double gap14 =
            cell(r, 0, "sum_db_feedback_on") - cell(r, 0, "sum_db_feedback_off");
        const double gap30 =
            cell(r, 1, "sum_db_feedback_on") - cell(r, 1, "sum_db_feedback_off");
        CHECK(gap30 > gap14);
        CHECK(gap30 == doctest::Approx(0.3163813422167978).epsilon(1e-9));
    }
    SUBCASE("zero reflectivity keeps both columns equal") {
        Config c = cfg;
        c.sweep.parameter = "sample.reflectivity";
        c.sweep.from = 0.0;
        c.sweep.to = 0.2;
        c.sweep.steps = 3;
        const ResultTable r = scenario_reflectivity_sweep(c, 1);
        CHECK(std::abs(cell(r, 0, "sum_db_feedback_on") -
                       cell(r, 0, "sum_db_feedback_off")) < 1e-12);
    }
}

TEST_CASE("cavity scan") {
    const Config cfg;
    const ResultTable t = scenario_cavity_scan(cfg);
    REQUIRE(static_cast<int>(t.rows.size()) == cfg.classical.scan_samples);

    double peak = 0.0;
    for (size_t i = 0; i < t.rows.size(); ++i) {
        peak = std::max(peak, cell(t, static_cast<int>(i), "circulating_power"));
    }
    CHECK(peak == doctest::Approx(0.09970390711180303).epsilon(1e-6));
    CHECK(std::abs(peak - 0.0997) < 1e-3);

    SUBCASE("triangle drive spans plus and minus the scan amplitude") {
        CHECK(cell(t, 0, "drive_voltage") == doctest::Approx(-cfg.classical.scan_amplitude));
        CHECK(cell(t, 1000, "drive_voltage") == doctest::Approx(cfg.classical.scan_amplitude));
        CHECK(cell(t, 2000, "drive_voltage") == doctest::Approx(-cfg.classical.scan_amplitude));
    }
    SUBCASE("fringe peaks sit a full free spectral range apart") {
        // local maxima of the trace over the upward half-scan
        std::vector<double> peak_thetas;
        for (int i = 1; i < 1000; ++i) {
            const double prev = cell(t, i - 1, "circulating_power");
            const double here = cell(t, i, "circulating_power");
            const double next = cell(t, i + 1, "circulating_power");
            if (here > prev && here > next) {
                peak_thetas.push_back(cfg.classical.volts_to_radians *
                                      cell(t, i, "drive_voltage"));
            }
        }
        REQUIRE(peak_thetas.size() >= 2);
        for (size_t i = 1; i < peak_thetas.size(); ++i) {
            CHECK(std::abs(peak_thetas[i] - peak_thetas[i - 1] - 2.0 * kPi) < 0.02);
        }
    }
    SUBCASE("no sample, no fringes") {
        Config c = cfg;
        c.sample.reflectivity = 0.0;
        c.sample.transmissivity = 0.89;
        const ResultTable r = scenario_cavity_scan(c);
        for (int i = 0; i < c.classical.scan_samples; ++i) {
            CHECK(cell(r, i, "circulating_power") == doctest::Approx(0.04).epsilon(1e-12));
        }
    }
}

TEST_CASE("snl calibration is feedback-invariant vacuum") {
    Config cfg;
    cfg.nopa.pump_parameter = 0.33; // scenario must force this off itself
    const ResultTable t = scenario_snl(cfg);
    REQUIRE(t.rows.size() == 1);
    for (const std::string& col : t.columns) {
        CHECK(cell(t, 0, col) == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(std::abs(cell(t, 0, "sum_var_feedback_on") -
                   cell(t, 0, "sum_var_feedback_off")) < 1e-12);
}

TEST_CASE("correct-detection scenario") {
    const Config cfg;
    const ResultTable t = scenario_correct_detection(cfg);
    CHECK(cell(t, 0, "detected_db") == doctest::Approx(2.2));
    CHECK(cell(t, 0, "inferred_db") == doctest::Approx(3.642871226623714).epsilon(1e-9));

    Config bad = cfg;
    bad.detection.detected_db = 6.0;
    CHECK_THROWS_AS(scenario_correct_detection(bad), std::domain_error);
}

TEST_CASE("calibrate scenario reproduces the shipped defaults") {
    const Config cfg;
    const ResultTable t = scenario_calibrate(cfg);
    CHECK(cell(t, 0, "target_sum_db") == doctest::Approx(2.7));
    CHECK(cell(t, 0, "target_diff_db") == doctest::Approx(2.1));
    CHECK(cell(t, 0, "pump_parameter") ==
          doctest::Approx(cfg.nopa.pump_parameter).epsilon(1e-12));
    CHECK(cell(t, 0, "excess_phase_noise") ==
          doctest::Approx(cfg.nopa.excess_phase_noise).epsilon(1e-12));
    CHECK(std::abs(cell(t, 0, "achieved_sum_db") - 2.7) < 0.001);

    SUBCASE("infeasible escape efficiency raises the calibration error") {
        Config weak = cfg;
        weak.nopa.escape_efficiency = 0.1;
        CHECK_THROWS_AS(scenario_calibrate(weak), CalibrationError);
    }
}

TEST_CASE("optimize-detuning scenario") {
    const Config cfg;
    const ResultTable t = scenario_optimize_detuning(cfg);
    CHECK(std::abs(cell(t, 0, "theta_star_d2")) < 1e-4);
    CHECK(std::abs(cell(t, 0, "theta_star_squeezing")) < 1e-4);
    CHECK(cell(t, 0, "degenerate") == 0.0);
    CHECK(cell(t, 0, "d2_min") == doctest::Approx(0.9142546398838493).epsilon(1e-6));
    CHECK(cell(t, 0, "sum_db_max") == doctest::Approx(2.1524317111327989).epsilon(1e-6));

    SUBCASE("zero reflectivity is degenerate") {
        Config c = cfg;
        c.sample.reflectivity = 0.0;
        c.sample.transmissivity = 0.89;
        c.classical.m3_power_reflectivity = 0.96;
        const ResultTable r = scenario_optimize_detuning(c);
        CHECK(cell(r, 0, "degenerate") == 1.0);
        CHECK(cell(r, 0, "theta_star_squeezing") == 0.0);
    }
}

TEST_CASE("entanglement survives transmission across the sweeps") {
    const Config cfg;
    const double om = analysis_omega(cfg);
    const double eta = cfg.detection.efficiency;
    auto duan_of = [&](const Network& net) {
        const DetectedPair d = measure_detected(net, om);
        const double vs = (d.sum_variance - (1.0 - eta)) / eta;
        const double vd = (d.diff_variance - (1.0 - eta)) / eta;
        return duan_sum(vs, vd).value;
    };
    for (int i = 0; i <= 20; ++i) {
        const double theta = -kPi + 2.0 * kPi * i / 20.0;
        CHECK(duan_of(feedback_network_with(cfg, true, 0.75, 0.14, 0.11, theta)) < 2.0);
    }
    for (int i = 0; i <= 15; ++i) {
        const double r = 0.05 + (0.45 * i) / 15.0;
        CHECK(duan_of(feedback_network_with(cfg, true, 1.0 - 0.11 - r, r, 0.11, 0.0)) < 2.0);
        CHECK(duan_of(feedback_network_with(cfg, false, 1.0 - 0.11 - r, r, 0.11, 0.0)) < 2.0);
    }
}

TEST_CASE("scenario dispatch") {
    const Config cfg;
    for (const std::string& name : scenario_names()) {
        const ResultTable t = run_scenario(name, cfg, 1);
        CHECK(t.scenario == name);
        CHECK(!t.columns.empty());
        CHECK(!t.rows.empty());
    }
    CHECK_THROWS_AS(run_scenario("bogus", cfg, 1), std::invalid_argument);

    SUBCASE("identical configs give identical tables") {
        const ResultTable a = run_scenario("feedback-eot", cfg, 1);
        const ResultTable b = run_scenario("feedback-eot", cfg, 1);
        REQUIRE(a.rows.size() == b.rows.size());
        for (size_t i = 0; i < a.rows.size(); ++i) {
            for (size_t c = 0; c < a.columns.size(); ++c) {
                CHECK(a.rows[i][c] == b.rows[i][c]);
            }
        }
    }
}
