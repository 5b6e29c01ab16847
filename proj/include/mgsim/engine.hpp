#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgsim/controller.hpp"
#include "mgsim/fleet.hpp"
#include "mgsim/loads.hpp"
#include "mgsim/sources.hpp"

namespace mgsim {

struct SimConfig {
    double dt_s = 0.01;
    double duration_s = 86400.0;
    double sample_every_s = 1.0;
    double f_nom_hz = 50.0;
    double s_base_mva = 15.0;
    double inertia_h_s = 96.0;  // aggregate, calibrated (see README)
    double damping_d_pu = 1.0;

    void validate() const;  // throws a Config error naming the offending field
};

struct MicrogridState {
    double t_s = 0.0;
    double delta_f_hz = 0.0;
    double p_diesel_mw = 0.0;
    double p_pv_mw = 0.0;
    double p_wind_mw = 0.0;
    double p_load_mw = 0.0;
    double p_ev_mw = 0.0;  // > 0: fleet consumes (G2V)
};

/// One explicit-Euler step of the aggregate swing model
///   d(df_pu)/dt = (p_imb_pu - D * df_pu) / (2H)
/// with df_pu = df/f_nom and p_imb_pu = p_imb/s_base. Returns the new
/// frequency deviation in Hz.
double swing_step(double delta_f_hz, double p_imbalance_mw, const SimConfig& cfg);

struct TraceSample {
    double t_s;
    double f_hz;
    double p_diesel_mw;
    double p_pv_mw;
    double p_wind_mw;
    double p_load_mw;
    double p_ev_mw;
    double mean_soc;
    FleetMode mode;
};

struct SimTrace {
    std::vector<TraceSample> samples;
    // Run-level audit, accumulated every integrator step.
    double max_alloc_residual_mw = 0.0;
    double max_conservation_err_hz = 0.0;
    double soc_min_seen = 1.0;
    double soc_max_seen = 0.0;
    bool completed = true;
    std::string fault;  // set when a mid-run fault left a partial trace
};

/// Timed contingency hooks resolved from the scenario script.
struct ScenarioHooks {
    bool pv_derate_active = false;
    double pv_derate_start_s = 0.0;
    double pv_derate_end_s = 0.0;
    double pv_derate = 1.0;
    bool gust_active = false;
    double gust_start_s = 0.0;
    double gust_end_s = 0.0;
    double gust_speed_m_s = 0.0;
};

/// All component handles for one run. Owns its state; never shared.
struct Simulation {
    SimConfig cfg;
    DieselGen diesel;
    PvFarm pv;
    WindFarm wind;
    ResidentialLoad load;
    AsyncMachine acm;
    FleetState fleet;
    FopidParams ctrl_params;
    ControllerState ctrl;
    ScenarioHooks hooks;
    MicrogridState state;
    std::int64_t step_index = 0;
    double last_applied_delta_f_hz = 0.0;  // conservation audit

    Simulation() : ctrl(ctrl_params.memory_len) {}

    /// Balances the initial operating point: diesel dispatched to the t = 0
    /// net demand, zero frequency deviation, fleet at rest.
    void init();

    /// Advances one dt. Fixed component order: environment sampling, sources
    /// and loads, controller + fleet, imbalance, swing update, clock.
    void step();

    /// Full-horizon run with trace decimation. A component fault mid-run
    /// yields the partial trace with the fault recorded.
    SimTrace run();
};

}  // namespace mgsim
