#include "mgsim/loads.hpp"

namespace mgsim {

double residential_power(const ResidentialLoad& load, double t_s) {
    return load.p_nominal_mw * load.profile.at(t_s);
}

double acm_power(const AsyncMachine& m, double t_s) {
    if (!m.enabled || t_s < m.start_time_s) return 0.0;
    // Rated operating point from the speed^2 torque law at rated speed.
    double p_rated = m.s_rated_mva * m.power_factor;
    double dt = t_s - m.start_time_s;
    if (dt < m.start_window_s) {
        double frac = dt / m.start_window_s;
        return m.inrush_factor * p_rated - (m.inrush_factor - 1.0) * p_rated * frac;
    }
    return p_rated;
}

}  // namespace mgsim
