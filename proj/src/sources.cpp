#include "mgsim/sources.hpp"

#include <algorithm>
#include <cmath>

#include "mgsim/errors.hpp"

namespace mgsim {

double governor_target_mw(const DieselGen& gen, double delta_f_hz, double f_nom_hz) {
    double cmd = gen.p_ref_mw - (delta_f_hz / f_nom_hz) / gen.droop_r_pu * gen.p_rated_mw;
    return std::clamp(cmd, 0.0, gen.p_rated_mw);
}

DieselGen governor_step(const DieselGen& gen, double delta_f_hz, double f_nom_hz, double dt_s) {
    if (!std::isfinite(delta_f_hz)) throw_sim("governor_step: non-finite frequency deviation");
    DieselGen out = gen;
    double target = governor_target_mw(gen, delta_f_hz, f_nom_hz);
    out.p_mech_mw += dt_s / gen.t_gov_s * (target - gen.p_mech_mw);
    out.p_mech_mw = std::clamp(out.p_mech_mw, 0.0, gen.p_rated_mw);
    return out;
}

DieselGen dispatch_step(const DieselGen& gen, double net_demand_mw, double dt_s) {
    DieselGen out = gen;
    double target = std::clamp(net_demand_mw, 0.0, gen.p_rated_mw);
    out.p_ref_mw += dt_s / gen.dispatch_t_s * (target - gen.p_ref_mw);
    return out;
}

double solar_cell_residual(double v_pv, double i_pv, const SolarCellParams& p) {
    double vd = v_pv + i_pv * p.r_s_ohm;
    return p.i_l_a - p.i_o_a * (std::exp(vd / (p.xi * p.v_t_v)) - 1.0) - vd / p.r_sh_ohm - i_pv;
}

double solar_cell_voc(const SolarCellParams& p) {
    if (p.i_l_a <= 0.0) return 0.0;
    return p.xi * p.v_t_v * std::log(p.i_l_a / p.i_o_a + 1.0);
}

double solar_cell_current(double v_pv, const SolarCellParams& p) {
    if (!std::isfinite(v_pv)) throw_sim("solar_cell_current: non-finite voltage");
    const double tol = 1e-10 * std::max(1.0, p.i_l_a);
    // g(i) = residual is strictly decreasing in i, so the root is unique and
    // bracketable. Newton with step damping, falling back to bisection of the
    // maintained bracket whenever an iterate escapes it.
    double lo = -std::abs(p.i_l_a) - 1.0;
    double hi = std::abs(p.i_l_a) * 2.0 + 1.0;
    while (solar_cell_residual(v_pv, lo, p) < 0.0) lo = lo * 2.0 - 1.0;
    while (solar_cell_residual(v_pv, hi, p) > 0.0) hi = hi * 2.0 + 1.0;

    // Explicit estimate with the Rs drop ignored is a good starting point.
    double i = p.i_l_a - p.i_o_a * (std::exp(v_pv / (p.xi * p.v_t_v)) - 1.0) - v_pv / p.r_sh_ohm;
    i = std::clamp(i, lo, hi);
    double g = solar_cell_residual(v_pv, i, p);
    for (int iter = 0; iter < 100; ++iter) {
        if (std::abs(g) < tol) return i;
        if (g > 0.0)
            lo = i;
        else
            hi = i;
        double vd = v_pv + i * p.r_s_ohm;
        double dg = -p.i_o_a * p.r_s_ohm / (p.xi * p.v_t_v) * std::exp(vd / (p.xi * p.v_t_v)) -
                    p.r_s_ohm / p.r_sh_ohm - 1.0;
        double i_next = i - g / dg;
        if (!std::isfinite(i_next) || i_next <= lo || i_next >= hi) i_next = 0.5 * (lo + hi);
        double g_next = solar_cell_residual(v_pv, i_next, p);
        // Damp until the residual magnitude actually drops.
        for (int halvings = 0; halvings < 40 && std::abs(g_next) >= std::abs(g); ++halvings) {
            i_next = 0.5 * (i_next + i);
            g_next = solar_cell_residual(v_pv, i_next, p);
        }
        i = i_next;
        g = g_next;
    }
    throw_sim("solar_cell_current: no convergence at v = " + std::to_string(v_pv) +
              " V, i_l = " + std::to_string(p.i_l_a) + " A");
}

SolarCellParams cell_at_irradiance(const PvFarm& farm, double irradiance_w_m2) {
    SolarCellParams c = farm.cell;
    c.i_l_a = farm.i_l_stc_a * irradiance_w_m2 / 1000.0;
    return c;
}

void inc_mppt_step(PvFarm& farm, double irradiance_w_m2) {
    if (irradiance_w_m2 < 0.0) throw_sim("inc_mppt_step: negative irradiance");
    SolarCellParams c = cell_at_irradiance(farm, irradiance_w_m2);
    MpptState& s = farm.mppt;
    if (s.v_next <= 0.0) {
        s.v_next = 0.8 * std::max(solar_cell_voc(c), 10.0 * farm.mppt_dv_v);
        s.last_v = 0.0;
        s.last_i = 0.0;
    }
    s.v_op = s.v_next;
    double i = solar_cell_current(s.v_op, c);
    double dv = s.v_op - s.last_v;
    double di = i - s.last_i;
    double step = farm.mppt_dv_v;
    double next_v = s.v_op;
    s.converged = false;
    if (dv == 0.0) {
        if (di == 0.0)
            s.converged = true;  // hold branch
        else
            next_v += (di > 0.0) ? step : -step;
    } else {
        double g_inc = di / dv;           // incremental conductance
        double g_op = -i / s.v_op;        // negated instantaneous conductance
        double tol = 0.005 * std::abs(i / s.v_op) + 1e-12;
        if (std::abs(g_inc - g_op) <= tol)
            s.converged = true;
        else if (g_inc > g_op)
            next_v += step;  // left of the MPP
        else
            next_v -= step;
    }
    s.last_v = s.v_op;
    s.last_i = i;
    s.i_op = i;
    s.v_next = std::max(next_v, step);
}

double pv_farm_power(PvFarm& farm, double t_s) {
    double g = farm.irradiance.at(t_s);
    if (g <= 0.0) {
        farm.last_irradiance = g;
        return 0.0;
    }
    if (g != farm.last_irradiance) {
        // I-V curve is static between 60 s irradiance samples, so the tracker
        // only has to re-converge when the held sample changes.
        farm.last_irradiance = g;
        for (int k = 0; k < 2000; ++k) {
            inc_mppt_step(farm, g);
            if (farm.mppt.converged) break;
        }
    }
    double p_cell_w = std::max(farm.mppt.v_op * farm.mppt.i_op, 0.0);
    double p_mw = p_cell_w * farm.cell.n_series * farm.cell.n_parallel * 1e-6;
    return std::clamp(p_mw, 0.0, farm.p_rated_mw) * farm.derate_factor;
}

double wind_area_default_m2(const WindFarm& farm) {
    double v3 = farm.v_nominal_m_s * farm.v_nominal_m_s * farm.v_nominal_m_s;
    return farm.p_rated_mw * 1e6 / (0.5 * farm.rho_kg_m3 * farm.cp * v3);
}

double wind_power(double v_m_s, const WindFarm& farm) {
    if (v_m_s < 0.0) throw_sim("wind_power: negative wind speed");
    if (!farm.online) return 0.0;
    double area = farm.area_m2 > 0.0 ? farm.area_m2 : wind_area_default_m2(farm);
    double p_mw = 0.5 * farm.rho_kg_m3 * area * farm.cp * v_m_s * v_m_s * v_m_s * 1e-6;
    return std::min(p_mw, farm.p_rated_mw);
}

void wind_trip_update(WindFarm& farm, double v_m_s) {
    if (farm.online && v_m_s > farm.v_trip_m_s)
        farm.online = false;
    else if (!farm.online && v_m_s <= farm.v_reconnect_m_s)
        farm.online = true;
}

}  // namespace mgsim
