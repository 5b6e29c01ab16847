#include "mgsim/engine.hpp"

#include <algorithm>
#include <cmath>

#include "mgsim/errors.hpp"

namespace mgsim {

namespace {
bool near_multiple(double a, double b) {
    double r = std::fmod(a, b);
    return r < 1e-6 * b || b - r < 1e-6 * b;
}
}  // namespace

void SimConfig::validate() const {
    if (!(dt_s > 0.0)) throw_config("sim.dt_s must be > 0");
    if (!(duration_s > 0.0)) throw_config("sim.duration_s must be > 0");
    if (!near_multiple(duration_s, dt_s))
        throw_config("sim.duration_s must be an integer multiple of sim.dt_s");
    if (sample_every_s < dt_s) throw_config("sim.sample_every_s must be >= sim.dt_s");
    if (!near_multiple(sample_every_s, dt_s))
        throw_config("sim.sample_every_s must be an integer multiple of sim.dt_s");
    if (!(f_nom_hz > 0.0)) throw_config("sim.f_nom_hz must be > 0");
    if (!(s_base_mva > 0.0)) throw_config("sim.s_base_mva must be > 0");
    if (!(inertia_h_s > 0.0)) throw_config("sim.inertia_h_s must be > 0");
    if (damping_d_pu < 0.0) throw_config("sim.damping_d_pu must be >= 0");
}

double swing_step(double delta_f_hz, double p_imbalance_mw, const SimConfig& cfg) {
    if (!std::isfinite(delta_f_hz) || !std::isfinite(p_imbalance_mw))
        throw_sim("swing_step: non-finite input");
    double df_pu = delta_f_hz / cfg.f_nom_hz;
    double p_pu = p_imbalance_mw / cfg.s_base_mva;
    double ddf_pu = (p_pu - cfg.damping_d_pu * df_pu) / (2.0 * cfg.inertia_h_s);
    return cfg.f_nom_hz * (df_pu + cfg.dt_s * ddf_pu);
}

void Simulation::init() {
    cfg.validate();
    step_index = 0;
    state = MicrogridState{};
    double t = 0.0;
    wind_trip_update(wind, wind.wind.at(t));
    state.p_wind_mw = wind_power(wind.wind.at(t), wind);
    state.p_pv_mw = pv_farm_power(pv, t);
    state.p_load_mw = residential_power(load, t) + acm_power(acm, t);
    state.p_ev_mw = 0.0;
    double net = state.p_load_mw - state.p_pv_mw - state.p_wind_mw;
    diesel.p_ref_mw = std::clamp(net, 0.0, diesel.p_rated_mw);
    diesel.p_mech_mw = diesel.p_ref_mw;
    state.p_diesel_mw = diesel.p_mech_mw;
    state.delta_f_hz = 0.0;
    state.t_s = 0.0;
    fleet.p_resp_mw = 0.0;
    fleet.mode = FleetMode::Idle;
}

void Simulation::step() {
    const double dt = cfg.dt_s;
    const double t = static_cast<double>(step_index) * dt;

    // (1) environment samples, with scenario overrides
    double derate = 1.0;
    if (hooks.pv_derate_active && t >= hooks.pv_derate_start_s && t < hooks.pv_derate_end_s)
        derate = hooks.pv_derate;
    double v_wind = wind.wind.at(t);
    if (hooks.gust_active && t >= hooks.gust_start_s && t < hooks.gust_end_s)
        v_wind = hooks.gust_speed_m_s;

    // (2) sources and loads
    pv.derate_factor = derate;
    double p_pv = pv_farm_power(pv, t);
    wind_trip_update(wind, v_wind);
    double p_wind = wind_power(v_wind, wind);
    double p_load = residential_power(load, t) + acm_power(acm, t);
    // Secondary dispatch tracks the native demand only. Following the EV term
    // too lets the diesel bankroll fleet charging, which then never ends.
    double prev_net = state.p_load_mw - state.p_pv_mw - state.p_wind_mw;
    diesel = dispatch_step(diesel, prev_net, dt);
    diesel = governor_step(diesel, state.delta_f_hz, cfg.f_nom_hz, dt);
    double p_diesel = diesel.p_mech_mw;

    // (3) controller + fleet
    double p_t = p_diesel + p_pv + p_wind - p_load;
    double se = se_percent(fleet, t);
    DispatchLimits lim = dispatchable_limits(fleet, t);
    double cmd = controller_step(ctrl, state.delta_f_hz, p_t, se, lim, ctrl_params, cfg.f_nom_hz,
                                 fleet.params.k_ev, dt);
    aggregate_response_step(fleet, cmd, t, dt);
    allocate_and_update_soc(fleet, t, dt);
    fleet.mode = ctrl.mode;

    state.t_s = t;
    state.p_diesel_mw = p_diesel;
    state.p_pv_mw = p_pv;
    state.p_wind_mw = p_wind;
    state.p_load_mw = p_load;
    state.p_ev_mw = fleet.p_resp_mw;

    // (4) imbalance, (5) swing update, (6) clock
    double p_imb = state.p_diesel_mw + state.p_pv_mw + state.p_wind_mw - state.p_load_mw -
                   state.p_ev_mw;
    last_applied_delta_f_hz = swing_step(state.delta_f_hz, p_imb, cfg);
    state.delta_f_hz = last_applied_delta_f_hz;
    ++step_index;
    state.t_s = static_cast<double>(step_index) * dt;
}

SimTrace Simulation::run() {
    init();
    SimTrace trace;
    const auto n_steps = static_cast<std::int64_t>(std::llround(cfg.duration_s / cfg.dt_s));
    const auto stride = static_cast<std::int64_t>(std::llround(cfg.sample_every_s / cfg.dt_s));
    trace.samples.reserve(static_cast<std::size_t>(n_steps / stride) + 1);

    auto record = [&](double t, double f_dev) {
        trace.samples.push_back({t, cfg.f_nom_hz + f_dev, state.p_diesel_mw, state.p_pv_mw,
                                 state.p_wind_mw, state.p_load_mw, state.p_ev_mw, mean_soc(fleet),
                                 fleet.mode});
        for (const auto& u : fleet.units) {
            trace.soc_min_seen = std::min(trace.soc_min_seen, u.soc);
            trace.soc_max_seen = std::max(trace.soc_max_seen, u.soc);
        }
    };

    try {
        for (std::int64_t k = 0; k < n_steps; ++k) {
            double df_before = state.delta_f_hz;
            step();
            // Sample convention: powers computed at t_k with the pre-update
            // frequency deviation at t_k.
            if (k % stride == 0)
                record(static_cast<double>(k) * cfg.dt_s, df_before);
            // Audit: re-derive the imbalance from the recorded component
            // powers; the applied update must match swing_step exactly.
            double p_imb = state.p_diesel_mw + state.p_pv_mw + state.p_wind_mw -
                           state.p_load_mw - state.p_ev_mw;
            double expect = swing_step(df_before, p_imb, cfg);
            trace.max_conservation_err_hz = std::max(
                trace.max_conservation_err_hz, std::abs(expect - last_applied_delta_f_hz));
            if (!std::isfinite(state.delta_f_hz))
                throw_sim("non-finite frequency at t = " + std::to_string(state.t_s));
        }
        record(cfg.duration_s, state.delta_f_hz);
    } catch (const Error& e) {
        trace.completed = false;
        trace.fault = e.what();
    }
    trace.max_alloc_residual_mw = fleet.max_alloc_residual_mw;
    if (fleet.units.empty()) {
        trace.soc_min_seen = fleet.params.soc_min;
        trace.soc_max_seen = fleet.params.soc_max;
    }
    return trace;
}

}  // namespace mgsim
