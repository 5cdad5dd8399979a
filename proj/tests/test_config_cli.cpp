#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "sideband/config.hpp"
#include "sideband/errors.hpp"
#include "sideband/table.hpp"

using namespace sideband;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::string error_text(const std::string& doc)
{
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}
} // namespace

TEST_CASE("empty document yields the documented defaults") {
    const Config cfg = parse_config("");
    CHECK(cfg.sample.transmissivity == doctest::Approx(0.75));
    CHECK(cfg.sample.reflectivity == doctest::Approx(0.14));
    CHECK(cfg.sample.loss == doctest::Approx(0.11));
    CHECK(cfg.detection.efficiency == doctest::Approx(0.7));
    CHECK(cfg.analysis.frequency_hz == doctest::Approx(2.0e6));
    CHECK(cfg.classical.m3_power_reflectivity == doctest::Approx(0.96));
    CHECK(cfg.nopa.kappa_total_hz == doctest::Approx(1.0e7));
    CHECK(cfg.feedback.enabled);
    CHECK(cfg.feedback.detuning == 0.0);
    CHECK(cfg.sweep.steps == 201);
}

TEST_CASE("sectioned and dotted spellings agree") {
    const Config a = parse_config("[sample]\nt = 0.6\nr = 0.29\nl = 0.11\n");
    const Config b = parse_config("sample.t = 0.6\nsample.r = 0.29\nsample.l = 0.11\n");
    const Config c = parse_config(
        "[sample]\ntransmissivity = 0.6\nreflectivity = 0.29\nloss = 0.11\n");
    CHECK(serialize_config(a) == serialize_config(b));
    CHECK(serialize_config(a) == serialize_config(c));
    CHECK(a.sample.transmissivity == doctest::Approx(0.6));
}

TEST_CASE("sample budget violation is named") {
    const std::string err = error_text("sample.t = 0.5\nsample.r = 0.6\n");
    CHECK(err.find("sample.t + sample.r + sample.l") != std::string::npos);
    CHECK(err.find("budget") != std::string::npos);
}

TEST_CASE("every offending key is listed, not just the first") {
    const std::string err = error_text(
        "[detection]\nefficiency = 1.4\n[sweep]\nsteps = 1\nbogus_key = 3\n");
    CHECK(err.find("detection.efficiency") != std::string::npos);
    CHECK(err.find("sweep.steps") != std::string::npos);
    CHECK(err.find("bogus_key") != std::string::npos);
}

TEST_CASE("syntax problems carry line numbers") {
    const std::string err = error_text("[nopa]\npump_parameter = 0.1\nnot a kv line\n");
    CHECK(err.find("line 3") != std::string::npos);
    CHECK(error_text("[who]\n").find("unknown section") != std::string::npos);
    CHECK(error_text("loose = 1\n").find("before any section") != std::string::npos);
}

TEST_CASE("unknown keys are rejected") {
    CHECK(error_text("[sample]\nq = 0.5\n").find("unknown key") != std::string::npos);
    Config cfg;
    CHECK_THROWS_AS(apply_override(cfg, "sample.q", "0.5"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "sample.t", "zero"), ConfigError);
}

TEST_CASE("degree-suffixed angle keys convert at parse time") {
    const Config cfg = parse_config(
        "[feedback]\ndetuning_deg = 90\n[nopa]\npump_phase_deg = 180\n");
    CHECK(cfg.feedback.detuning == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    CHECK(cfg.nopa.pump_phase == doctest::Approx(kPi).epsilon(1e-12));

    Config o;
    apply_override(o, "sweep.from_deg", "-180");
    CHECK(o.sweep.from == doctest::Approx(-kPi).epsilon(1e-12));
}

TEST_CASE("comments and blank lines are ignored") {
    const Config cfg = parse_config(
        "# loss measurement from the run book\n\n[sample]\n"
        "t = 0.75  # as shipped\nr = 0.14\nl = 0.11\n");
    CHECK(cfg.sample.transmissivity == doctest::Approx(0.75));
}

TEST_CASE("parse-serialize round trip is a fixed point") {
    Config cfg;
    cfg.nopa.pump_parameter = 0.24923273660480399;
    cfg.feedback.detuning = -2.718281828459045;
    cfg.feedback.enabled = false;
    cfg.sample.transmissivity = 0.61;
    cfg.sample.reflectivity = 0.28;
    cfg.analysis.frequency_hz = 2.1e6;
    cfg.sweep.parameter = "sample.r";
    cfg.sweep.steps = 31;
    const std::string once = serialize_config(cfg);
    const Config back = parse_config(once);
    CHECK(serialize_config(back) == once);
    CHECK(back.feedback.detuning == cfg.feedback.detuning);
    CHECK(back.nopa.pump_parameter == cfg.nopa.pump_parameter);
    CHECK_FALSE(back.feedback.enabled);
}

TEST_CASE("validation collects invariant violations on overridden configs") {
    Config cfg;
    apply_override(cfg, "detection.efficiency", "0");
    apply_override(cfg, "sweep.steps", "1");
    try {
        validate_config(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("detection.efficiency") != std::string::npos);
        CHECK(msg.find("sweep.steps") != std::string::npos);
    }
}

TEST_CASE("config hash tracks content") {
    Config a;
    Config b;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.sample.reflectivity = 0.15;
    b.sample.transmissivity = 0.74;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("angular frequency views") {
    const Config cfg;
    CHECK(analysis_omega(cfg) == doctest::Approx(2.0 * kPi * 2.0e6));
    CHECK(nopa_kappa_total(cfg) == doctest::Approx(2.0 * kPi * 1.0e7));
    CHECK(analysis_omega(cfg) / nopa_kappa_total(cfg) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("format_double survives the round trip") {
    for (double v : {0.1, kPi, 1.0 / 3.0, 6.02e23, -1.25e-13, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("csv rendering") {
    ResultTable t;
    t.scenario = "demo";
    t.columns = {"a", "b"};
    t.rows = {{1.5, -2.25}, {0.1, 3.0}};

    SUBCASE("deterministic output has no timestamp and a fixed layout") {
        const std::string text = render_csv(t, "deadbeef00000000", true);
        CHECK(text.find("# scenario: demo\n") == 0);
        CHECK(text.find("# version: ") != std::string::npos);
        CHECK(text.find("# config: deadbeef00000000") != std::string::npos);
        CHECK(text.find("generated") == std::string::npos);
        CHECK(text.find("a,b\n") != std::string::npos);
        CHECK(text.find("0.10000000000000001,3\n") != std::string::npos);
        CHECK(render_csv(t, "deadbeef00000000", true) == text);
    }
    SUBCASE("timestamp appears otherwise") {
        CHECK(render_csv(t, "00", false).find("# generated: ") != std::string::npos);
    }
    SUBCASE("empty table renders comments and header only") {
        ResultTable empty;
        empty.scenario = "demo";
        empty.columns = {"x"};
        const std::string text = render_csv(empty, "00", true);
        CHECK(text.find("x\n") != std::string::npos);
        CHECK(text.rfind("x\n") == text.size() - 2);
    }
    SUBCASE("ragged and non-finite tables are refused") {
        ResultTable bad = t;
        bad.rows.push_back({1.0});
        CHECK_THROWS_AS(render_csv(bad, "00", true), std::runtime_error);
        ResultTable inf = t;
        inf.rows[0][0] = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(render_csv(inf, "00", true), std::runtime_error);
    }
}

TEST_CASE("write_csv rejects unwritable destinations") {
    ResultTable t;
    t.scenario = "demo";
    t.columns = {"a"};
    t.rows = {{1.0}};
    try {
        write_csv(t, "/nonexistent-dir/out.csv", "00", true);
        FAIL("expected failure");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/out.csv") != std::string::npos);
    }
}
