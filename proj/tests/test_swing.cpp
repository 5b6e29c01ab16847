#include <doctest.h>

#include <cmath>
#include <random>

#include "mgsim/engine.hpp"
#include "mgsim/errors.hpp"
#include "oracles/oracles.hpp"

using namespace mgsim;

namespace {
SimConfig base_cfg() {
    SimConfig cfg;
    cfg.f_nom_hz = 50.0;
    cfg.s_base_mva = 15.0;
    cfg.inertia_h_s = 5.0;
    cfg.damping_d_pu = 1.0;
    cfg.dt_s = 0.01;
    return cfg;
}
}  // namespace

TEST_CASE("swing update matches the hand-evaluated Euler form") {
    SimConfig cfg = base_cfg();
    // +1.5 MW on 15 MVA, df = 0: df' = 50 * 0.01 * 0.1 / 10 = 0.005 Hz.
    CHECK(swing_step(0.0, 1.5, cfg) == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(swing_step(0.0, 1.5, cfg) ==
          oracles::euler_swing_update(0.0, 1.5, 50.0, 15.0, 5.0, 1.0, 0.01));
}

TEST_CASE("swing update equals the oracle bit-for-bit over random states") {
    SimConfig cfg = base_cfg();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> df(-2.0, 2.0), p(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        double d = df(rng), pi = p(rng);
        CHECK(swing_step(d, pi, cfg) ==
              oracles::euler_swing_update(d, pi, cfg.f_nom_hz, cfg.s_base_mva, cfg.inertia_h_s,
                                          cfg.damping_d_pu, cfg.dt_s));
    }
}

TEST_CASE("constant imbalance converges to the damped steady state") {
    SimConfig cfg = base_cfg();
    double df = 0.0;
    for (int k = 0; k < 2'000'000; ++k) df = swing_step(df, 1.5, cfg);
    CHECK(df == doctest::Approx(oracles::swing_steady_state(1.5, 50.0, 15.0, 1.0)).epsilon(1e-9));
}

TEST_CASE("sign symmetry") {
    SimConfig cfg = base_cfg();
    CHECK(swing_step(0.0, -2.5, cfg) == -swing_step(0.0, 2.5, cfg));
    CHECK(swing_step(-0.4, 0.0, cfg) == -swing_step(0.4, 0.0, cfg));
}

TEST_CASE("swing_step rejects non-finite input") {
    SimConfig cfg = base_cfg();
    CHECK_THROWS_AS(swing_step(std::nan(""), 0.0, cfg), Error);
    CHECK_THROWS_AS(swing_step(0.0, INFINITY, cfg), Error);
}

TEST_CASE("config validation") {
    SimConfig cfg = base_cfg();
    CHECK_NOTHROW(cfg.validate());

    SimConfig bad = cfg;
    bad.dt_s = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.duration_s = 100.005;  // not a multiple of dt
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.sample_every_s = 0.005;  // finer than dt
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.inertia_h_s = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}
