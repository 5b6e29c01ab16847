#pragma once

#include "mgsim/profiles.hpp"

namespace mgsim {

/// Diesel generator with a proportional droop governor. The prime mover
/// relaxes first-order toward the droop target; the dispatch setpoint p_ref
/// is load-following through its own (slower) first-order lag.
struct DieselGen {
    double p_rated_mw = 15.0;
    double droop_r_pu = 0.025;
    double t_gov_s = 5.0;
    double dispatch_t_s = 30.0;  // secondary-dispatch lag on p_ref
    double p_ref_mw = 0.0;
    double p_mech_mw = 0.0;
};

/// Droop target before actuator dynamics: p_ref - (df/f_nom)/R * p_rated,
/// clamped into [0, p_rated].
double governor_target_mw(const DieselGen& gen, double delta_f_hz, double f_nom_hz);

/// One first-order governor step toward the droop target.
DieselGen governor_step(const DieselGen& gen, double delta_f_hz, double f_nom_hz, double dt_s);

/// One first-order dispatch step of p_ref toward the measured net demand.
DieselGen dispatch_step(const DieselGen& gen, double net_demand_mw, double dt_s);

/// Single-diode cell parameters. The implicit terminal equation is
///   I = I_L - I_o*(exp((V + I*Rs)/(xi*Vt)) - 1) - (V + I*Rs)/Rsh
struct SolarCellParams {
    double i_l_a = 8.0;      // photo current at the evaluated irradiance
    double i_o_a = 1e-10;    // diode saturation current
    double xi = 1.3;         // ideality factor
    double v_t_v = 0.02585;  // thermal voltage at 25 C
    double r_s_ohm = 0.005;
    double r_sh_ohm = 1000.0;
    int n_series = 2000;
    int n_parallel = 780;
};

/// Residual of the implicit cell equation at (v, i); zero at the solution.
double solar_cell_residual(double v_pv, double i_pv, const SolarCellParams& p);

/// Solves the implicit cell equation for the terminal current at a given cell
/// voltage. Damped Newton with a bisection fallback; throws a Sim error if it
/// fails to reach |residual| < 1e-10 * max(1, I_L) within the iteration cap.
double solar_cell_current(double v_pv, const SolarCellParams& p);

/// Open-circuit voltage estimate used to bound the MPPT search.
double solar_cell_voc(const SolarCellParams& p);

struct MpptState {
    double v_op = 0.0;   // voltage actually applied this step
    double i_op = 0.0;   // current measured at v_op
    double v_next = 0.0; // perturbed command for the next step
    double last_v = 0.0;
    double last_i = 0.0;
    bool converged = false;
};

struct PvFarm {
    double p_rated_mw = 8.0;
    SolarCellParams cell;          // at standard irradiance (1000 W/m2)
    double i_l_stc_a = 8.0;        // photo current at 1000 W/m2, linear in G
    double mppt_dv_v = 0.002;      // perturbation step of the operating voltage
    ZohProfile irradiance;         // W/m2
    double derate_factor = 1.0;    // scenario hook
    MpptState mppt;
    double last_irradiance = -1.0;
};

SolarCellParams cell_at_irradiance(const PvFarm& farm, double irradiance_w_m2);

/// One incremental-conductance perturbation of the operating voltage.
/// Compares dI/dV against -I/V and moves v_op one mppt_dv_v step toward the
/// maximum power point; holds when the two conductances agree.
void inc_mppt_step(PvFarm& farm, double irradiance_w_m2);

/// Array power at time t: MPP-tracked cell power scaled by the array counts,
/// multiplied by derate_factor and clamped to [0, p_rated_mw]. The MPPT is
/// re-converged whenever the held irradiance sample changes.
double pv_farm_power(PvFarm& farm, double t_s);

struct WindFarm {
    double p_rated_mw = 4.5;
    double rho_kg_m3 = 1.225;
    double area_m2 = 0.0;  // 0 = derive from cp so rated power sits at v_nominal
    double cp = 0.45;
    double v_nominal_m_s = 13.5;
    double v_trip_m_s = 15.0;
    double v_reconnect_m_s = 13.5;
    bool online = true;
    ZohProfile wind;  // m/s
};

double wind_area_default_m2(const WindFarm& farm);

/// min(0.5 * rho * A * cp * v^3, p_rated) while online, else 0.
double wind_power(double v_m_s, const WindFarm& farm);

/// Trip hysteresis: online and v > v_trip goes offline; offline and
/// v <= v_reconnect comes back; otherwise unchanged.
void wind_trip_update(WindFarm& farm, double v_m_s);

}  // namespace mgsim
