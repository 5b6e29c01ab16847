#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mgsim {

enum class FleetMode { Idle = 0, Charging = 1, Regulation = 2 };

const char* to_string(FleetMode m);

struct PlugInterval {
    double begin_s = 0.0;
    double end_s = 0.0;
};

struct EvUnit {
    int profile_id = 1;  // 1..5
    double soc = 0.5;
    double capacity_kwh = 40.0;
    double p_charger_kw = 45.0;  // bidirectional limit
    std::vector<PlugInterval> plug_schedule;

    bool plugged(double t_s) const;
};

struct FleetParams {
    int ev_count = 0;
    std::uint64_t seed = 1;
    double capacity_kwh = 40.0;
    double charger_kw = 45.0;
    double eta = 1.0;  // round-trip losses excluded
    double p_cap_mw = 4.0;
    bool cap_scales_with_count = true;   // 4 MW per 100-vehicle aggregation
    double k_ev = 0.333;
    double t_ev_s = 1.0;
    double soc_min = 0.2;
    double soc_max = 0.8;
    std::string roster_csv;  // optional roster override
};

struct FleetState {
    std::vector<EvUnit> units;
    FleetParams params;
    double p_resp_mw = 0.0;  // signed; > 0 means the fleet consumes (G2V)
    FleetMode mode = FleetMode::Idle;
    double max_alloc_residual_mw = 0.0;  // diagnostics, worst over the run
};

struct DispatchLimits {
    double max_charge_mw = 0.0;
    double max_discharge_mw = 0.0;
};

/// n_evs units spread evenly over the five availability profiles (remainder
/// to the lowest profile ids). Initial SOC per profile template plus a small
/// seeded jitter, kept strictly inside the SOC band.
FleetState build_fleet(const FleetParams& params);

/// Loads a roster CSV: profile_id, capacity_kwh, charger_kw, initial_soc,
/// plug_begin_s, plug_end_s [, plug_begin_s, plug_end_s ...]
FleetState load_fleet_roster(const FleetParams& params, const std::string& path);

/// Percent of units plugged in at t with SOC strictly inside the band.
double se_percent(const FleetState& fleet, double t_s);

DispatchLimits dispatchable_limits(const FleetState& fleet, double t_s);

/// First-order response dp/dt = (k_ev * p_cmd - p_resp) / t_ev, then clamp
/// into the dispatchable limits at time t.
void aggregate_response_step(FleetState& fleet, double p_cmd_mw, double t_s, double dt_s);

/// Splits p_resp across plugged units pro-rata by SOC headroom, honoring each
/// charger limit and never letting a unit cross the band. p_resp is first
/// clamped to what the roster can physically absorb this step, so the
/// allocation residual stays below 1e-9 MW.
void allocate_and_update_soc(FleetState& fleet, double t_s, double dt_s);

double mean_soc(const FleetState& fleet);

}  // namespace mgsim
