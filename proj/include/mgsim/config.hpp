#pragma once

#include <map>
#include <string>
#include <vector>

#include "mgsim/engine.hpp"

namespace mgsim {

struct ProfileFiles {
    bool flat = false;  // constant environment (testing aid): load 0.7 pu,
                        // irradiance 0, wind at nominal speed
    std::string irradiance_csv;
    std::string wind_csv;
    std::string load_csv;
};

struct ScenarioParams {
    bool events_enabled = true;
    double pv_event_start_s = 43200.0;
    double pv_event_end_s = 43500.0;
    double pv_derate = 0.2;
    double wind_event_start_s = 79200.0;
    double gust_duration_s = 600.0;
    double gust_speed_m_s = 16.0;
    double acm_start_s = 43200.0;
};

struct PvConfig {
    double p_rated_mw = 8.0;
    SolarCellParams cell;
    double i_l_stc_a = 8.0;
    double mppt_dv_v = 0.002;
    double sunrise_s = 25000.0;
    double sunset_s = 66600.0;
    double peak_w_m2 = 1000.0;
};

struct WindConfig {
    double p_rated_mw = 4.5;
    double rho_kg_m3 = 1.225;
    double cp = 0.45;
    double area_m2 = 0.0;  // 0 = auto from rated point at v_nominal
    double v_nominal_m_s = 13.5;
    double v_trip_m_s = 15.0;
    double v_reconnect_m_s = 13.5;
};

struct LoadConfig {
    double p_nominal_mw = 10.0;
    double power_factor = 0.95;
};

struct AcmConfig {
    double s_rated_mva = 0.75;  // calibrated; see README
    double power_factor = 0.9;
    double inrush_factor = 7.0;
    double start_window_s = 10.0;
};

struct DieselConfig {
    double p_rated_mw = 15.0;
    double droop_r_pu = 0.025;
    double t_gov_s = 5.0;
    double dispatch_t_s = 30.0;
};

/// Fully-resolved run configuration; every field has a default. Unknown keys
/// and out-of-range values are rejected by name.
struct RunConfig {
    SimConfig sim;
    DieselConfig diesel;
    PvConfig pv;
    WindConfig wind;
    LoadConfig load;
    AcmConfig acm;
    FleetParams fleet;
    FopidParams controller;
    ScenarioParams scenario;
    ProfileFiles profiles;
    std::string output_dir = ".";

    /// Applies one dotted-path key. Throws a Config error for unknown keys or
    /// out-of-range values, naming the key path.
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    static std::vector<std::string> known_keys();

    /// Cross-field invariants (dt divides duration, band ordering, ...).
    void validate() const;
};

/// Parses a line-oriented `key = value` file ('#' comments, blank lines ok)
/// on top of defaults, then applies flag overrides in order.
RunConfig parse_config(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& flag_overrides = {});
RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& flag_overrides = {});

}  // namespace mgsim
