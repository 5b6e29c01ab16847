#pragma once

// Independent reference computations used by the test suites and the CLI's
// `oracle` subcommand. Nothing here may call into the simulator's solvers;
// every routine is a brute-force or closed-form alternative route.

#include <cstddef>
#include <string>
#include <vector>

#include "mgsim/sources.hpp"

namespace mgsim::oracles {

/// Hand-evaluated explicit-Euler swing update:
/// df' = df + dt * f_nom * ((p_imb/s_base) - d * (df/f_nom)) / (2 h).
double euler_swing_update(double delta_f_hz, double p_imb_mw, double f_nom_hz, double s_base_mva,
                          double h_s, double d_pu, double dt_s);

/// Closed-form steady state of the damped swing ODE under constant imbalance.
double swing_steady_state(double p_imb_mw, double f_nom_hz, double s_base_mva, double d_pu);

/// Bisection solve of the implicit single-diode equation, bracketed in
/// [-i_l, 2 i_l]. Pure residual evaluations, no Newton.
double bisect_cell_current(double v_pv, const SolarCellParams& p, double tol_a = 1e-13);

struct MppPoint {
    double v = 0.0;
    double i = 0.0;
    double p = 0.0;
};

/// Brute-force MPP: sweep the cell voltage in dv steps from 0 to open
/// circuit, current from the bisection route.
MppPoint sweep_mpp(const SolarCellParams& p, double dv = 0.001);

/// Conventional discrete PID: backward-Euler integral, backward difference
/// derivative. Returns per-sample outputs for the whole error sequence.
std::vector<double> pid_reference(const std::vector<double>& errors, double kp, double ki,
                                  double kd, double dt_s);

/// Analytic unit-lag response k * (1 - exp(-t/tau)) to a command step.
double first_order_step_response(double t_s, double gain, double cmd, double tau_s);

/// Running rectangle-rule integral of an error sequence (GL order -1 route).
std::vector<double> running_sum_integral(const std::vector<double>& errors, double dt_s);

/// Formatted report of the standard reference values, for `mgsim oracle`.
std::string report();

}  // namespace mgsim::oracles
