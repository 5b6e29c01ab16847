#pragma once

#include <string>
#include <vector>

namespace mgsim {

/// Zero-order-hold time series at a fixed native resolution (60 s for all
/// built-in environment profiles). Values are held between samples and the
/// last sample extends to the end of the horizon.
struct ZohProfile {
    double step_s = 60.0;
    std::vector<double> values;

    double at(double t_s) const;
    bool empty() const { return values.empty(); }
};

// Built-in defaults covering one 86,400 s day.
ZohProfile default_irradiance_profile(double sunrise_s, double sunset_s, double peak_w_m2);
ZohProfile default_wind_profile(double v_nominal_m_s);
ZohProfile default_load_profile();

ZohProfile constant_profile(double value, double duration_s, double step_s = 60.0);

/// Loads a two-column CSV (time_s, value). Header row optional. Rows must be
/// equally spaced starting at t = 0.
ZohProfile load_profile_csv(const std::string& path);

}  // namespace mgsim
