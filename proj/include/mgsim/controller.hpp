#pragma once

#include <cstddef>
#include <vector>

#include "mgsim/fleet.hpp"

namespace mgsim {

struct FopidParams {
    double kp = 1.0;
    double ki = 0.02;
    double kd = 0.01;
    double lambda = 1.0;  // fractional integral order, (0, 2)
    double mu = 1.0;      // fractional derivative order, (0, 2)
    std::size_t memory_len = 1000;
    double g1 = -1.0;
    double k1 = 0.01;
    double k2_threshold = 0.5;
    double dead_band_pu = 0.001;
    double rate_limit_mw_per_s = 4.0;
    double output_gain_mw_per_hz = 60.0;
    double aw_leak_t_s = 10.0;         // integral bleed time constant while the
                                       // error sits inside the dead band (0 = off)
    bool dead_band_offset = false;     // ramp (offset) variant instead of pass-through
    bool gain_compensation = true;     // divide the command by k_ev so the
                                       // achieved fleet response spans the limits
};

/// Grunwald-Letnikov binomial weights w_0..w_len for D^order:
/// w_0 = 1, w_j = w_{j-1} * (1 - (order + 1)/j).
std::vector<double> gl_weights(double order, std::size_t len);

/// Truncated GL evaluation over history (oldest first, newest last):
/// dt^(-order) * sum_j w_j * e[k-j], j = 0..min(memory_len, k).
/// order = +1 is the backward difference, order = -1 the rectangle-rule
/// integral over the memory window, order = 0 the identity.
double gl_fractional_op(const std::vector<double>& history, double order, double dt_s,
                        std::size_t memory_len);

struct ControllerState {
    std::vector<double> error_ring;  // capacity memory_len, newest at head-1
    std::size_t head = 0;
    std::size_t count = 0;
    double running_error_sum = 0.0;  // exact integral path for lambda == 1
    double prev_error = 0.0;
    double last_output_mw = 0.0;  // rate-limiter memory, achieved-power domain
    FleetMode mode = FleetMode::Idle;
    // Cached GL weight tables for the fractional paths.
    std::vector<double> wi, wd;
    double wi_order = 2.0, wd_order = 2.0;

    explicit ControllerState(std::size_t memory_len = 1000) : error_ring(memory_len, 0.0) {}
    void push_error(double e);
    /// Errors ordered oldest..newest, at most memory_len of them.
    std::vector<double> history() const;
};

/// Zero inside |df|/f_nom <= dead_band_pu; pass-through (or offset, when the
/// ramp variant is selected) outside.
double dead_band_filter(double delta_f_hz, double f_nom_hz, double dead_band_pu,
                        bool offset = false);

/// u = kp*e + ki*D^(-lambda) e + kd*D^(mu) e on the recorded error history.
/// Appends the new error. Integer orders use their exact recursive forms
/// (full running sum / backward difference); fractional orders use the
/// truncated GL sum.
double fopid_output(ControllerState& state, double filtered_error_hz, const FopidParams& p,
                    double dt_s);

/// Mode gate per the sign of the net non-EV power balance p_t:
/// Regulation needs p_t < 0, |u_signal| above the k2 threshold (scaled by
/// k1/dt) and a non-empty available fleet; p_t > 0 selects Charging.
FleetMode select_mode(double p_t_mw, double u_signal_mw, double se_pct, const FopidParams& p,
                      double dt_s);

/// Rate limiter first, then saturation into [-max_discharge, +max_charge].
double apply_limiters(double raw_cmd_mw, double last_output_mw, const DispatchLimits& limits,
                      double rate_limit_mw_per_s, double dt_s);

/// Full pipeline: dead band -> FOPID -> g1 scaling to megawatts -> mode gate
/// -> limiters. Returns the fleet power command (signed, + = charge). With
/// gain compensation on, the command is pre-divided by k_ev so the fleet's
/// steady-state response equals the limited output.
double controller_step(ControllerState& state, double delta_f_hz, double p_t_mw, double se_pct,
                       const DispatchLimits& limits, const FopidParams& p, double f_nom_hz,
                       double k_ev, double dt_s);

}  // namespace mgsim
