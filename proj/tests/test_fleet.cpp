#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mgsim/errors.hpp"
#include "mgsim/fleet.hpp"
#include "oracles/oracles.hpp"

using namespace mgsim;

namespace {
FleetParams params_n(int n) {
    FleetParams p;
    p.ev_count = n;
    return p;
}
}  // namespace

TEST_CASE("build_fleet spreads units over the five profiles") {
    FleetState fleet = build_fleet(params_n(100));
    REQUIRE(fleet.units.size() == 100);
    int counts[6] = {0};
    for (const auto& u : fleet.units) {
        REQUIRE(u.profile_id >= 1);
        REQUIRE(u.profile_id <= 5);
        ++counts[u.profile_id];
    }
    for (int p = 1; p <= 5; ++p) CHECK(counts[p] == 20);

    FleetState odd = build_fleet(params_n(7));  // remainder goes to low ids
    int c2[6] = {0};
    for (const auto& u : odd.units) ++c2[u.profile_id];
    CHECK(c2[1] == 2);
    CHECK(c2[2] == 2);
    CHECK(c2[3] == 1);
    CHECK(c2[5] == 1);
}

TEST_CASE("initial SOC sits near the profile anchor, strictly inside the band") {
    FleetState fleet = build_fleet(params_n(200));
    const double anchors[6] = {0.0, 0.3, 0.4, 0.5, 0.6, 0.7};
    for (const auto& u : fleet.units) {
        CHECK(std::abs(u.soc - anchors[u.profile_id]) <= 0.02 + 1e-12);
        CHECK(u.soc > fleet.params.soc_min);
        CHECK(u.soc < fleet.params.soc_max);
    }
}

TEST_CASE("fleet build is deterministic per seed") {
    FleetState a = build_fleet(params_n(50));
    FleetState b = build_fleet(params_n(50));
    REQUIRE(a.units.size() == b.units.size());
    for (std::size_t i = 0; i < a.units.size(); ++i) CHECK(a.units[i].soc == b.units[i].soc);

    FleetParams other = params_n(50);
    other.seed = 99;
    FleetState c = build_fleet(other);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.units.size(); ++i) any_diff |= a.units[i].soc != c.units[i].soc;
    CHECK(any_diff);
}

TEST_CASE("plug schedules cover both contingency hours for 80% of the fleet") {
    FleetState fleet = build_fleet(params_n(100));
    for (double t : {43200.0, 79200.0}) {
        int plugged = 0;
        for (const auto& u : fleet.units) plugged += u.plugged(t) ? 1 : 0;
        CHECK(plugged == 80);
    }
}

TEST_CASE("se_percent counts plugged in-band units only") {
    FleetState fleet = build_fleet(params_n(10));
    CHECK(se_percent(fleet, 43200.0) == doctest::Approx(80.0));
    for (auto& u : fleet.units) u.soc = fleet.params.soc_max;  // pinned: nothing dispatchable
    CHECK(se_percent(fleet, 43200.0) == 0.0);
    FleetState empty = build_fleet(params_n(0));
    CHECK(se_percent(empty, 0.0) == 0.0);
}

TEST_CASE("dispatchable limits honor chargers, band edges, and the aggregate cap") {
    FleetParams p = params_n(100);  // 80 plugged x 45 kW = 3.6 MW, cap 4 MW
    FleetState fleet = build_fleet(p);
    DispatchLimits lim = dispatchable_limits(fleet, 43200.0);
    CHECK(lim.max_charge_mw == doctest::Approx(3.6));
    CHECK(lim.max_discharge_mw == doctest::Approx(3.6));

    FleetState big = build_fleet(params_n(200));  // 160 x 45 kW = 7.2, cap scales to 8
    DispatchLimits lim2 = dispatchable_limits(big, 43200.0);
    CHECK(lim2.max_charge_mw == doctest::Approx(7.2));

    for (auto& u : fleet.units) u.soc = p.soc_max;
    lim = dispatchable_limits(fleet, 43200.0);
    CHECK(lim.max_charge_mw == 0.0);               // no charge headroom at the top edge
    CHECK(lim.max_discharge_mw == doctest::Approx(3.6));  // still dischargeable
}

TEST_CASE("aggregate response hits 63.2% +- 1% of k_ev-scaled steady state at t_ev") {
    FleetState fleet = build_fleet(params_n(100));
    double dt = 0.01, cmd = 3.0, t = 43200.0;
    int steps = static_cast<int>(fleet.params.t_ev_s / dt);
    for (int k = 0; k < steps; ++k) aggregate_response_step(fleet, cmd, t, dt);
    double target = fleet.params.k_ev * cmd;  // 0.999 MW, inside the limits
    double frac = fleet.p_resp_mw / target;
    CHECK(frac > 0.632 - 0.01);
    CHECK(frac < 0.632 + 0.01);
}

TEST_CASE("aggregate response refines first-order toward the analytic curve") {
    double t_end = 1.0, cmd = 3.0;
    auto simulate = [&](double dt) {
        FleetState fleet = build_fleet(params_n(100));
        int steps = static_cast<int>(std::lround(t_end / dt));
        for (int k = 0; k < steps; ++k) aggregate_response_step(fleet, cmd, 43200.0, dt);
        return fleet.p_resp_mw;
    };
    double exact = oracles::first_order_step_response(t_end, 0.333, cmd, 1.0);
    double e1 = std::abs(simulate(0.02) - exact);
    double e2 = std::abs(simulate(0.01) - exact);
    double ratio = e1 / e2;
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.3);
}

TEST_CASE("response clamps to the dispatchable limits") {
    FleetState fleet = build_fleet(params_n(100));
    for (int k = 0; k < 10000; ++k) aggregate_response_step(fleet, 1000.0, 43200.0, 0.01);
    CHECK(fleet.p_resp_mw == doctest::Approx(3.6));
    for (int k = 0; k < 10000; ++k) aggregate_response_step(fleet, -1000.0, 43200.0, 0.01);
    CHECK(fleet.p_resp_mw == doctest::Approx(-3.6));
}

TEST_CASE("allocation conserves energy into SOC within 1e-9 MW") {
    FleetState fleet = build_fleet(params_n(100));
    double t = 43200.0, dt = 0.01;
    fleet.p_resp_mw = 2.5;
    double soc_before = mean_soc(fleet);
    allocate_and_update_soc(fleet, t, dt);
    CHECK(fleet.max_alloc_residual_mw < 1e-9);
    // 2.5 MW for 0.01 s into 100 x 40 kWh: mean dSOC = 2.5e3*dt/3600 / 4000.
    double expect = 2.5e3 * dt / 3600.0 / (100.0 * 40.0);
    CHECK(mean_soc(fleet) - soc_before == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("allocation never pushes a unit across the band") {
    FleetState fleet = build_fleet(params_n(20));
    for (auto& u : fleet.units) u.soc = fleet.params.soc_max - 1e-7;  // nearly full
    fleet.p_resp_mw = 0.9;  // far more than the remaining headroom
    allocate_and_update_soc(fleet, 43200.0, 1.0);
    for (const auto& u : fleet.units) CHECK(u.soc <= fleet.params.soc_max + 1e-15);
    // The response was re-clamped to what the roster could absorb.
    CHECK(fleet.p_resp_mw < 0.9);
    CHECK(fleet.max_alloc_residual_mw < 1e-9);
}

TEST_CASE("discharge allocation drains pro-rata and respects soc_min") {
    FleetState fleet = build_fleet(params_n(20));
    for (auto& u : fleet.units) u.soc = fleet.params.soc_min + 1e-7;
    fleet.p_resp_mw = -0.9;
    allocate_and_update_soc(fleet, 43200.0, 1.0);
    for (const auto& u : fleet.units) CHECK(u.soc >= fleet.params.soc_min - 1e-15);
    CHECK(fleet.p_resp_mw > -0.9);
    CHECK(fleet.max_alloc_residual_mw < 1e-9);
}

TEST_CASE("roster CSV round trip") {
    const char* path = "roster_test.csv";
    {
        std::ofstream out(path);
        out << "profile_id,capacity_kwh,charger_kw,initial_soc,plug_begin,plug_end\n";
        out << "1,40,45,0.35,0,28800,72000,86400\n";
        out << "3,60,11,0.55,28800,61200\n";
    }
    FleetParams p;
    p.roster_csv = path;
    FleetState fleet = build_fleet(p);
    REQUIRE(fleet.units.size() == 2);
    CHECK(fleet.units[0].plug_schedule.size() == 2);
    CHECK(fleet.units[1].capacity_kwh == 60.0);
    CHECK(fleet.units[1].plugged(30000.0));
    CHECK_FALSE(fleet.units[1].plugged(70000.0));
    std::remove(path);
}

TEST_CASE("roster rejects SOC outside the band") {
    const char* path = "roster_bad.csv";
    {
        std::ofstream out(path);
        out << "1,40,45,0.95,0,86400\n";
    }
    FleetParams p;
    p.roster_csv = path;
    CHECK_THROWS_AS(build_fleet(p), Error);
    std::remove(path);
}
