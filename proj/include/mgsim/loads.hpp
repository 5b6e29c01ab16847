#pragma once

#include "mgsim/profiles.hpp"

namespace mgsim {

struct ResidentialLoad {
    double p_nominal_mw = 10.0;
    double power_factor = 0.95;  // metadata only; frequency dynamics use MW
    ZohProfile profile;          // per-unit multiplier of nominal
};

double residential_power(const ResidentialLoad& load, double t_s);

/// Squirrel-cage induction machine reduced to its inrush power envelope:
/// zero before start, inrush_factor x rated active power at switch-on
/// decaying linearly to rated over start_window_s, rated thereafter.
struct AsyncMachine {
    double s_rated_mva = 0.75;
    double power_factor = 0.9;
    double inrush_factor = 7.0;  // direct-on-line start, 6..8 typical
    double start_time_s = 43200.0;
    double start_window_s = 10.0;
    bool enabled = false;
};

double acm_power(const AsyncMachine& m, double t_s);

}  // namespace mgsim
