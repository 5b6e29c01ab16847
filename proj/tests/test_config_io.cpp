#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mgsim/config.hpp"
#include "mgsim/errors.hpp"
#include "mgsim/io.hpp"
#include "mgsim/scenario.hpp"

using namespace mgsim;

TEST_CASE("empty config text yields the documented defaults") {
    RunConfig cfg = parse_config_text("");
    CHECK(cfg.sim.dt_s == 0.01);
    CHECK(cfg.sim.duration_s == 86400.0);
    CHECK(cfg.sim.f_nom_hz == 50.0);
    CHECK(cfg.sim.s_base_mva == 15.0);
    CHECK(cfg.diesel.p_rated_mw == 15.0);
    CHECK(cfg.diesel.droop_r_pu == 0.025);
    CHECK(cfg.pv.p_rated_mw == 8.0);
    CHECK(cfg.wind.p_rated_mw == 4.5);
    CHECK(cfg.load.p_nominal_mw == 10.0);
    CHECK(cfg.fleet.p_cap_mw == 4.0);
    CHECK(cfg.fleet.k_ev == 0.333);
    CHECK(cfg.fleet.t_ev_s == 1.0);
    CHECK(cfg.fleet.soc_min == 0.2);
    CHECK(cfg.fleet.soc_max == 0.8);
    CHECK(cfg.controller.kp == 1.0);
    CHECK(cfg.controller.ki == 0.02);
    CHECK(cfg.controller.kd == 0.01);
    CHECK(cfg.controller.lambda == 1.0);
    CHECK(cfg.controller.mu == 1.0);
    CHECK(cfg.controller.k2_threshold == 0.5);
    CHECK(cfg.controller.k1 == 0.01);
    CHECK(cfg.controller.g1 == -1.0);
    CHECK(cfg.controller.dead_band_pu == 0.001);
    CHECK(cfg.scenario.pv_event_start_s == 43200.0);
    CHECK(cfg.scenario.pv_event_end_s == 43500.0);
    CHECK(cfg.scenario.pv_derate == 0.2);
    CHECK(cfg.scenario.wind_event_start_s == 79200.0);
    CHECK(cfg.scenario.gust_duration_s == 600.0);
}

TEST_CASE("key-value text with comments and overrides") {
    RunConfig cfg = parse_config_text(
        "# a comment\n"
        "sim.dt_s = 0.02\n"
        "\n"
        "fleet.ev_count = 42   \n"
        "controller.lambda = 0.9\n",
        {{"sim.dt_s", "0.005"}});  // flag overrides win
    CHECK(cfg.sim.dt_s == 0.005);
    CHECK(cfg.fleet.ev_count == 42);
    CHECK(cfg.controller.lambda == 0.9);
}

TEST_CASE("unknown keys and bad values are rejected by name") {
    CHECK_THROWS_WITH_AS(parse_config_text("sim.dtt = 1\n"),
                         doctest::Contains("sim.dtt"), Error);
    CHECK_THROWS_AS(parse_config_text("sim.dt_s = -1\n"), Error);
    CHECK_THROWS_AS(parse_config_text("sim.dt_s = banana\n"), Error);
    CHECK_THROWS_AS(parse_config_text("acm.inrush_factor = 20\n"), Error);
    CHECK_THROWS_AS(parse_config_text("fleet.soc_min = 0.9\n"), Error);  // above soc_max
    CHECK_THROWS_AS(parse_config_text("no_equals_sign\n"), Error);
}

TEST_CASE("set/get round-trips every known key") {
    RunConfig cfg = parse_config_text("");
    for (const auto& key : RunConfig::known_keys()) {
        std::string v = cfg.get(key);
        CHECK_NOTHROW(cfg.set(key, v));
        CHECK(cfg.get(key) == v);
    }
    CHECK_THROWS_AS(cfg.get("nope"), Error);
}

TEST_CASE("trace CSV round trip preserves values and modes") {
    SimTrace trace;
    trace.samples = {{0.0, 50.0, 1.0, 2.0, 3.0, 9.5, 0.0, 0.5, FleetMode::Idle},
                     {1.0, 49.876543210987, 5.5, 0.0, 4.5, 13.5, -3.6, 0.4321, FleetMode::Regulation},
                     {2.0, 50.1, 0.0, 8.0, 4.5, 7.0, 3.6, 0.5678, FleetMode::Charging}};
    const char* path = "trace_roundtrip.csv";
    write_trace_csv(trace, path);
    SimTrace back = read_trace_csv(path);
    REQUIRE(back.samples.size() == trace.samples.size());
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
        CHECK(back.samples[k].t_s == trace.samples[k].t_s);
        CHECK(back.samples[k].f_hz == trace.samples[k].f_hz);
        CHECK(back.samples[k].p_ev_mw == trace.samples[k].p_ev_mw);
        CHECK(back.samples[k].mode == trace.samples[k].mode);
    }
    std::remove(path);
}

TEST_CASE("trace CSV emission is deterministic") {
    SimTrace trace;
    trace.samples = {{0.0, 50.0, 1, 2, 3, 9.5, 0, 0.5, FleetMode::Idle}};
    CHECK(trace_csv_string(trace) == trace_csv_string(trace));
    CHECK(trace_csv_string(trace).rfind("t_s,f_hz,", 0) == 0);
}

TEST_CASE("summary table marks failed cells") {
    BatchResult batch;
    for (std::size_t i = 0; i < batch.cells.size(); ++i) {
        batch.cells[i].scenario = static_cast<ScenarioId>(i / 3);
        batch.cells[i].case_id = static_cast<CaseId>(i % 3);
        if (i == 4) {
            batch.cells[i].error = "boom";
        } else {
            RunSummary s;
            s.f_min_hz = 49.5;
            s.f_max_hz = 50.5;
            s.max_abs_dev_hz = 0.5;
            batch.cells[i].summary = s;
        }
    }
    std::string table = summary_table_string(batch);
    CHECK(table.find("ERROR") != std::string::npos);
    CHECK(table.find("49.5000") != std::string::npos);
    std::string json = summary_json_string(batch);
    CHECK(json.find("boom") != std::string::npos);
    CHECK(json.find("max_abs_dev_hz") != std::string::npos);
}

TEST_CASE("plot script lists every trace and uses a headless backend") {
    std::string script = plot_script_string({"a.csv", "b.csv"});
    CHECK(script.find("a.csv") != std::string::npos);
    CHECK(script.find("b.csv") != std::string::npos);
    CHECK(script.find("Agg") != std::string::npos);
    CHECK_THROWS_AS(plot_script_string({}), Error);
}

TEST_CASE("profile CSV loader enforces spacing and origin") {
    const char* path = "profile_test.csv";
    {
        std::ofstream out(path);
        out << "t_s,value\n0,0.7\n60,0.8\n120,0.9\n";
    }
    ZohProfile p = load_profile_csv(path);
    CHECK(p.step_s == 60.0);
    CHECK(p.at(59.9) == 0.7);
    CHECK(p.at(60.0) == 0.8);
    CHECK(p.at(1e6) == 0.9);  // last value holds
    std::remove(path);

    {
        std::ofstream out(path);
        out << "0,0.7\n60,0.8\n200,0.9\n";  // uneven spacing
    }
    CHECK_THROWS_AS(load_profile_csv(path), Error);
    std::remove(path);

    CHECK_THROWS_AS(load_profile_csv("no_such_file.csv"), Error);
}

TEST_CASE("io errors carry the io code") {
    SimTrace trace;
    trace.samples = {{0.0, 50.0, 0, 0, 0, 0, 0, 0.0, FleetMode::Idle}};
    try {
        write_trace_csv(trace, "/nonexistent_dir_zz/x.csv");
        FAIL("expected an io error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrKind::Io);
        CHECK(e.code() == 4);
    }
}
