#include "oracles.hpp"

#include <cmath>
#include <sstream>

namespace mgsim::oracles {

double euler_swing_update(double delta_f_hz, double p_imb_mw, double f_nom_hz, double s_base_mva,
                          double h_s, double d_pu, double dt_s) {
    double df_pu = delta_f_hz / f_nom_hz;
    double p_pu = p_imb_mw / s_base_mva;
    double ddf_pu = (p_pu - d_pu * df_pu) / (2.0 * h_s);
    return f_nom_hz * (df_pu + dt_s * ddf_pu);
}

double swing_steady_state(double p_imb_mw, double f_nom_hz, double s_base_mva, double d_pu) {
    return f_nom_hz * (p_imb_mw / s_base_mva) / d_pu;
}

namespace {
double residual(double v, double i, const SolarCellParams& p) {
    double vd = v + i * p.r_s_ohm;
    return p.i_l_a - p.i_o_a * (std::exp(vd / (p.xi * p.v_t_v)) - 1.0) - vd / p.r_sh_ohm - i;
}
}  // namespace

double bisect_cell_current(double v_pv, const SolarCellParams& p, double tol_a) {
    double lo = -p.i_l_a, hi = 2.0 * p.i_l_a;
    // The residual is strictly decreasing in i; widen if the bracket misses.
    while (residual(v_pv, lo, p) < 0.0) lo = 2.0 * lo - 1.0;
    while (residual(v_pv, hi, p) > 0.0) hi = 2.0 * hi + 1.0;
    for (int k = 0; k < 200 && hi - lo > tol_a; ++k) {
        double mid = 0.5 * (lo + hi);
        if (residual(v_pv, mid, p) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

MppPoint sweep_mpp(const SolarCellParams& p, double dv) {
    MppPoint best;
    if (p.i_l_a <= 0.0) return best;
    double voc = p.xi * p.v_t_v * std::log(p.i_l_a / p.i_o_a + 1.0);
    for (double v = dv; v <= voc; v += dv) {
        double i = bisect_cell_current(v, p);
        double pw = v * i;
        if (pw > best.p) best = {v, i, pw};
    }
    return best;
}

std::vector<double> pid_reference(const std::vector<double>& errors, double kp, double ki,
                                  double kd, double dt_s) {
    std::vector<double> out(errors.size());
    double integral = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        double e = errors[k];
        integral += e * dt_s;
        double deriv = (e - prev) / dt_s;
        out[k] = kp * e + ki * integral + kd * deriv;
        prev = e;
    }
    return out;
}

double first_order_step_response(double t_s, double gain, double cmd, double tau_s) {
    return gain * cmd * (1.0 - std::exp(-t_s / tau_s));
}

std::vector<double> running_sum_integral(const std::vector<double>& errors, double dt_s) {
    std::vector<double> out(errors.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        sum += errors[k];
        out[k] = sum * dt_s;
    }
    return out;
}

std::string report() {
    std::ostringstream out;
    out.precision(12);
    out << "Independent reference values\n"
        << "----------------------------\n";

    out << "swing update, df=0, P=+1.5 MW, H=5 s, D=1, S=15 MVA, dt=0.01 s -> "
        << euler_swing_update(0.0, 1.5, 50.0, 15.0, 5.0, 1.0, 0.01) << " Hz\n";
    out << "swing steady state, P=+1.5 MW, D=1, S=15 MVA -> "
        << swing_steady_state(1.5, 50.0, 15.0, 1.0) << " Hz\n";

    SolarCellParams cell;
    out << "single-diode bisection, default cell at v = 0.5 V -> "
        << bisect_cell_current(0.5, cell) << " A\n";
    MppPoint mpp = sweep_mpp(cell);
    out << "brute-force MPP sweep (1 mV), default cell -> v = " << mpp.v << " V, i = " << mpp.i
        << " A, p = " << mpp.p << " W\n";

    std::vector<double> e = {1.0};
    auto pid = pid_reference(e, 1.0, 0.02, 0.01, 0.01);
    out << "discrete PID, single error 1.0 (kp=1, ki=0.02, kd=0.01, dt=0.01) -> " << pid[0]
        << "\n";

    out << "first-order EV response at t = T_ev (k=0.333, step cmd 3 MW) -> "
        << first_order_step_response(1.0, 0.333, 3.0, 1.0) << " MW ("
        << 100.0 * (1.0 - std::exp(-1.0)) << "% of steady state)\n";

    out << "droop target shift, df=-0.5 Hz, R=0.05, rated 15 MW -> "
        << (0.5 / 50.0) / 0.05 * 15.0 << " MW\n";

    out << "ACM inrush, factor 7, 2 MVA, pf 0.9 -> " << 7.0 * 2.0 * 0.9 << " MW\n";
    return out.str();
}

}  // namespace mgsim::oracles
