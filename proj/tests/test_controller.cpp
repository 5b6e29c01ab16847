#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mgsim/controller.hpp"
#include "mgsim/errors.hpp"
#include "oracles/oracles.hpp"

using namespace mgsim;

TEST_CASE("GL weights: order -1 gives the all-ones rectangle rule") {
    auto w = gl_weights(-1.0, 5);
    for (double x : w) CHECK(x == doctest::Approx(1.0));
}

TEST_CASE("GL weights: order +1 gives the backward difference pair") {
    auto w = gl_weights(1.0, 5);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == -1.0);
    for (std::size_t j = 2; j < w.size(); ++j) CHECK(w[j] == doctest::Approx(0.0));
}

TEST_CASE("GL order -1 on constant history matches the running-sum oracle") {
    std::vector<double> e(50, 1.0);
    auto ref = oracles::running_sum_integral(e, 0.01);
    std::vector<double> hist;
    for (std::size_t k = 0; k < e.size(); ++k) {
        hist.push_back(e[k]);
        CHECK(gl_fractional_op(hist, -1.0, 0.01, 1000) == doctest::Approx(ref[k]).epsilon(1e-12));
    }
    // 50 samples of 1.0 at dt = 0.01 integrate to 0.5.
    CHECK(ref.back() == doctest::Approx(0.5));
}

TEST_CASE("fractional orders interpolate between the integer anchors") {
    std::vector<double> hist = {0.2, -0.4, 1.0, 0.5};
    double d_half = gl_fractional_op(hist, 0.5, 0.01, 1000);
    double i_half = gl_fractional_op(hist, -0.5, 0.01, 1000);
    CHECK(std::isfinite(d_half));
    CHECK(std::isfinite(i_half));
    // Half-order operators differ from all three integer anchors.
    CHECK(d_half != gl_fractional_op(hist, 0.0, 0.01, 1000));
    CHECK(i_half != gl_fractional_op(hist, -1.0, 0.01, 1000));
}

TEST_CASE("single error sample through the default gains gives 2.0002") {
    FopidParams p;  // kp 1, ki 0.02, kd 0.01, lambda = mu = 1
    ControllerState st(p.memory_len);
    double u = fopid_output(st, 1.0, p, 0.01);
    CHECK(u == doctest::Approx(2.0002).epsilon(1e-12));
}

TEST_CASE("integer-order FOPID matches the discrete PID oracle over 10000 samples") {
    FopidParams p;
    ControllerState st(p.memory_len);
    std::mt19937_64 rng(123);
    std::normal_distribution<double> noise(0.0, 0.5);
    std::vector<double> errors(10000);
    for (auto& e : errors) e = noise(rng);
    auto ref = oracles::pid_reference(errors, p.kp, p.ki, p.kd, 0.01);
    for (std::size_t k = 0; k < errors.size(); ++k) {
        double u = fopid_output(st, errors[k], p, 0.01);
        REQUIRE(std::abs(u - ref[k]) < 1e-9);
    }
}

TEST_CASE("truncated GL integral equals the running sum while inside the window") {
    FopidParams p;
    p.lambda = 1.0;
    ControllerState st(p.memory_len);
    // For lambda = 1 the exact running-sum path is used, so histories longer
    // than the GL window must still match the full-memory PID oracle.
    std::vector<double> errors(3 * p.memory_len, 0.25);
    auto ref = oracles::pid_reference(errors, p.kp, p.ki, p.kd, 0.01);
    double u = 0.0;
    for (std::size_t k = 0; k < errors.size(); ++k) u = fopid_output(st, errors[k], p, 0.01);
    CHECK(u == doctest::Approx(ref.back()).epsilon(1e-12));
}

TEST_CASE("dead band zeroes small deviations and passes large ones") {
    CHECK(dead_band_filter(0.04, 50.0, 0.001) == 0.0);   // band is 0.05 Hz
    CHECK(dead_band_filter(-0.05, 50.0, 0.001) == 0.0);  // inclusive edge
    CHECK(dead_band_filter(0.2, 50.0, 0.001) == 0.2);
    CHECK(dead_band_filter(-0.2, 50.0, 0.001) == -0.2);
    // Offset variant is continuous at the band edge.
    CHECK(dead_band_filter(0.06, 50.0, 0.001, true) == doctest::Approx(0.01));
    CHECK(dead_band_filter(-0.06, 50.0, 0.001, true) == doctest::Approx(-0.01));
}

TEST_CASE("mode gate") {
    FopidParams p;  // k2 * k1/dt = 0.5 MW at dt = 0.01
    double dt = 0.01;
    CHECK(select_mode(2.0, 0.0, 50.0, p, dt) == FleetMode::Charging);
    CHECK(select_mode(0.2, 0.0, 50.0, p, dt) == FleetMode::Idle);  // surplus below threshold
    CHECK(select_mode(-2.0, -3.0, 50.0, p, dt) == FleetMode::Regulation);
    CHECK(select_mode(-2.0, -0.4, 50.0, p, dt) == FleetMode::Idle);  // |u| under threshold
    CHECK(select_mode(-2.0, -3.0, 0.0, p, dt) == FleetMode::Idle);   // nothing dispatchable
    CHECK(select_mode(0.0, -3.0, 50.0, p, dt) == FleetMode::Idle);   // balanced bus
}

TEST_CASE("rate limiter bounds the step, saturation bounds the value") {
    DispatchLimits lim{3.6, 3.6};
    // From 0 at 4 MW/s, dt 0.01: at most 0.04 per step.
    CHECK(apply_limiters(5.0, 0.0, lim, 4.0, 0.01) == doctest::Approx(0.04));
    CHECK(apply_limiters(-5.0, 0.0, lim, 4.0, 0.01) == doctest::Approx(-0.04));
    // Already at the edge: saturation wins.
    CHECK(apply_limiters(5.0, 3.59, lim, 4.0, 0.01) == doctest::Approx(3.6));
    CHECK(apply_limiters(-5.0, -3.59, lim, 4.0, 0.01) == doctest::Approx(-3.6));
}

TEST_CASE("controller pipeline issues a growing discharge command under-frequency") {
    FopidParams p;
    ControllerState st(p.memory_len);
    DispatchLimits lim{3.6, 3.6};
    double cmd = 0.0;
    for (int k = 0; k < 200; ++k)
        cmd = controller_step(st, -0.3, -2.0, 80.0, lim, p, 50.0, 0.333, 0.01);
    CHECK(st.mode == FleetMode::Regulation);
    CHECK(cmd < 0.0);
    // Gain compensation: the command is the limited output divided by k_ev.
    CHECK(st.last_output_mw == doctest::Approx(cmd * 0.333).epsilon(1e-9));
    CHECK(st.last_output_mw >= -3.6 - 1e-12);
}

TEST_CASE("inside the dead band the integral bleeds away") {
    FopidParams p;
    ControllerState st(p.memory_len);
    DispatchLimits lim{3.6, 3.6};
    for (int k = 0; k < 500; ++k) controller_step(st, -0.3, -2.0, 80.0, lim, p, 50.0, 0.333, 0.01);
    double held = st.running_error_sum;
    CHECK(held > 0.0);
    for (int k = 0; k < 500; ++k) controller_step(st, 0.0, -2.0, 80.0, lim, p, 50.0, 0.333, 0.01);
    // 5 s at a 10 s bleed constant: roughly 40% remains.
    CHECK(st.running_error_sum < 0.7 * held);
    CHECK(st.running_error_sum > 0.0);
}

TEST_CASE("charging command follows the surplus, capped at the charge limit") {
    FopidParams p;
    ControllerState st(p.memory_len);
    DispatchLimits lim{2.0, 3.6};
    double cmd = 0.0;
    for (int k = 0; k < 400; ++k) cmd = controller_step(st, 0.0, 5.0, 80.0, lim, p, 50.0, 0.333, 0.01);
    CHECK(st.mode == FleetMode::Charging);
    CHECK(st.last_output_mw == doctest::Approx(2.0));  // charge limit, not the 5 MW surplus
    CHECK(cmd == doctest::Approx(2.0 / 0.333));
}

TEST_CASE("non-finite input is rejected") {
    FopidParams p;
    ControllerState st(p.memory_len);
    DispatchLimits lim{1.0, 1.0};
    CHECK_THROWS_AS(controller_step(st, std::nan(""), 0.0, 0.0, lim, p, 50.0, 0.333, 0.01), Error);
}
