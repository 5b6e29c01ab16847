#include "mgsim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>

#include "mgsim/errors.hpp"

namespace mgsim {

namespace {

struct KeyEntry {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw_config("invalid numeric value for " + key + ": '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw_config("invalid boolean value for " + key + ": '" + value + "'");
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(15);
    ss << v;
    return ss.str();
}

using Check = std::function<bool(double)>;

const Check positive = [](double v) { return v > 0.0; };
const Check non_negative = [](double v) { return v >= 0.0; };
const Check any = [](double) { return true; };
Check in_range(double lo, double hi) {
    return [lo, hi](double v) { return v >= lo && v <= hi; };
}

const std::map<std::string, KeyEntry>& key_table() {
    static const std::map<std::string, KeyEntry> table = [] {
        std::map<std::string, KeyEntry> t;
        auto add = [&t](const std::string& key, std::function<double*(RunConfig&)> field,
                        Check check, std::string requirement) {
            t[key] = {
                [key, field, check, requirement](RunConfig& c, const std::string& v) {
                    double x = parse_double(key, v);
                    if (!check(x)) throw_config(key + " out of range (" + requirement + "): " + v);
                    *field(c) = x;
                },
                [field](const RunConfig& c) { return fmt(*field(const_cast<RunConfig&>(c))); },
            };
        };
        auto add_bool = [&t](const std::string& key, std::function<bool*(RunConfig&)> field) {
            t[key] = {
                [key, field](RunConfig& c, const std::string& v) { *field(c) = parse_bool(key, v); },
                [field](const RunConfig& c) {
                    return *field(const_cast<RunConfig&>(c)) ? "true" : "false";
                },
            };
        };
        auto add_str = [&t](const std::string& key, std::function<std::string*(RunConfig&)> field) {
            t[key] = {
                [field](RunConfig& c, const std::string& v) { *field(c) = v; },
                [field](const RunConfig& c) { return *field(const_cast<RunConfig&>(c)); },
            };
        };
        auto add_size = [&t](const std::string& key, std::function<std::size_t*(RunConfig&)> field,
                             std::size_t min_v) {
            t[key] = {
                [key, field, min_v](RunConfig& c, const std::string& v) {
                    double x = parse_double(key, v);
                    if (x < static_cast<double>(min_v) || x != std::floor(x))
                        throw_config(key + " must be an integer >= " + std::to_string(min_v));
                    *field(c) = static_cast<std::size_t>(x);
                },
                [field](const RunConfig& c) {
                    return std::to_string(*field(const_cast<RunConfig&>(c)));
                },
            };
        };
        auto add_int = [&t](const std::string& key, std::function<int*(RunConfig&)> field,
                            int min_v) {
            t[key] = {
                [key, field, min_v](RunConfig& c, const std::string& v) {
                    double x = parse_double(key, v);
                    if (x < min_v || x != std::floor(x))
                        throw_config(key + " must be an integer >= " + std::to_string(min_v));
                    *field(c) = static_cast<int>(x);
                },
                [field](const RunConfig& c) {
                    return std::to_string(*field(const_cast<RunConfig&>(c)));
                },
            };
        };

#define F(expr) [](RunConfig& c) { return &(c.expr); }
        add("sim.dt_s", F(sim.dt_s), positive, "> 0");
        add("sim.duration_s", F(sim.duration_s), positive, "> 0");
        add("sim.sample_every_s", F(sim.sample_every_s), positive, "> 0");
        add("sim.f_nom_hz", F(sim.f_nom_hz), positive, "> 0");
        add("sim.s_base_mva", F(sim.s_base_mva), positive, "> 0");
        add("sim.inertia_h_s", F(sim.inertia_h_s), positive, "> 0");
        add("sim.damping_d_pu", F(sim.damping_d_pu), non_negative, ">= 0");

        add("diesel.p_rated_mw", F(diesel.p_rated_mw), positive, "> 0");
        add("diesel.droop_r_pu", F(diesel.droop_r_pu), positive, "> 0");
        add("diesel.t_gov_s", F(diesel.t_gov_s), positive, "> 0");
        add("diesel.dispatch_t_s", F(diesel.dispatch_t_s), positive, "> 0");

        add("pv.p_rated_mw", F(pv.p_rated_mw), non_negative, ">= 0");
        add("pv.xi", F(pv.cell.xi), in_range(1.0, 2.0), "in [1, 2]");
        add("pv.v_t_v", F(pv.cell.v_t_v), positive, "> 0");
        add("pv.i_o_a", F(pv.cell.i_o_a), positive, "> 0");
        add("pv.r_s_ohm", F(pv.cell.r_s_ohm), non_negative, ">= 0");
        add("pv.r_sh_ohm", F(pv.cell.r_sh_ohm), positive, "> 0");
        add("pv.i_l_stc_a", F(pv.i_l_stc_a), positive, "> 0");
        add_int("pv.n_series", F(pv.cell.n_series), 1);
        add_int("pv.n_parallel", F(pv.cell.n_parallel), 1);
        add("pv.mppt_dv_v", F(pv.mppt_dv_v), positive, "> 0");
        add("pv.sunrise_s", F(pv.sunrise_s), non_negative, ">= 0");
        add("pv.sunset_s", F(pv.sunset_s), positive, "> 0");
        add("pv.peak_w_m2", F(pv.peak_w_m2), non_negative, ">= 0");

        add("wind.p_rated_mw", F(wind.p_rated_mw), non_negative, ">= 0");
        add("wind.rho_kg_m3", F(wind.rho_kg_m3), positive, "> 0");
        add("wind.cp", F(wind.cp), in_range(0.0, 0.593), "in [0, 0.593]");
        add("wind.area_m2", F(wind.area_m2), non_negative, ">= 0 (0 = auto)");
        add("wind.v_nominal_m_s", F(wind.v_nominal_m_s), positive, "> 0");
        add("wind.v_trip_m_s", F(wind.v_trip_m_s), positive, "> 0");
        add("wind.v_reconnect_m_s", F(wind.v_reconnect_m_s), positive, "> 0");

        add("load.p_nominal_mw", F(load.p_nominal_mw), non_negative, ">= 0");
        add("load.power_factor", F(load.power_factor), in_range(0.0, 1.0), "in [0, 1]");

        add("acm.s_rated_mva", F(acm.s_rated_mva), non_negative, ">= 0");
        add("acm.power_factor", F(acm.power_factor), in_range(0.0, 1.0), "in [0, 1]");
        add("acm.inrush_factor", F(acm.inrush_factor), in_range(6.0, 8.0), "in [6, 8]");
        add("acm.start_window_s", F(acm.start_window_s), positive, "> 0");

        add_int("fleet.ev_count", F(fleet.ev_count), 0);
        t["fleet.seed"] = {
            [](RunConfig& c, const std::string& v) {
                double x = parse_double("fleet.seed", v);
                if (x < 0.0 || x != std::floor(x))
                    throw_config("fleet.seed must be a non-negative integer");
                c.fleet.seed = static_cast<std::uint64_t>(x);
            },
            [](const RunConfig& c) { return std::to_string(c.fleet.seed); },
        };
        add("fleet.capacity_kwh", F(fleet.capacity_kwh), positive, "> 0");
        add("fleet.charger_kw", F(fleet.charger_kw), positive, "> 0");
        add("fleet.eta", F(fleet.eta), in_range(0.0, 1.0), "in (0, 1]");
        add("fleet.p_cap_mw", F(fleet.p_cap_mw), non_negative, ">= 0");
        add_bool("fleet.cap_scales_with_count", F(fleet.cap_scales_with_count));
        add("fleet.k_ev", F(fleet.k_ev), positive, "> 0");
        add("fleet.t_ev_s", F(fleet.t_ev_s), positive, "> 0");
        add("fleet.soc_min", F(fleet.soc_min), in_range(0.0, 1.0), "in [0, 1]");
        add("fleet.soc_max", F(fleet.soc_max), in_range(0.0, 1.0), "in [0, 1]");
        add_str("fleet.roster_csv", F(fleet.roster_csv));

        add("controller.kp", F(controller.kp), any, "finite");
        add("controller.ki", F(controller.ki), any, "finite");
        add("controller.kd", F(controller.kd), any, "finite");
        add("controller.lambda", F(controller.lambda), in_range(0.0, 2.0), "in (0, 2)");
        add("controller.mu", F(controller.mu), in_range(0.0, 2.0), "in (0, 2)");
        add_size("controller.memory_len", F(controller.memory_len), 1);
        add("controller.g1", F(controller.g1), any, "finite");
        add("controller.k1", F(controller.k1), positive, "> 0");
        add("controller.k2_threshold", F(controller.k2_threshold), non_negative, ">= 0");
        add("controller.dead_band_pu", F(controller.dead_band_pu), non_negative, ">= 0");
        add("controller.rate_limit_mw_per_s", F(controller.rate_limit_mw_per_s), positive, "> 0");
        add("controller.output_gain_mw_per_hz", F(controller.output_gain_mw_per_hz), any, "finite");
        add("controller.aw_leak_t_s", F(controller.aw_leak_t_s), non_negative, ">= 0");
        add_bool("controller.dead_band_offset", F(controller.dead_band_offset));
        add_bool("controller.gain_compensation", F(controller.gain_compensation));

        add_bool("scenario.events_enabled", F(scenario.events_enabled));
        add("scenario.pv_event_start_s", F(scenario.pv_event_start_s), non_negative, ">= 0");
        add("scenario.pv_event_end_s", F(scenario.pv_event_end_s), non_negative, ">= 0");
        add("scenario.pv_derate", F(scenario.pv_derate), in_range(0.0, 1.0), "in [0, 1]");
        add("scenario.wind_event_start_s", F(scenario.wind_event_start_s), non_negative, ">= 0");
        add("scenario.gust_duration_s", F(scenario.gust_duration_s), positive, "> 0");
        add("scenario.gust_speed_m_s", F(scenario.gust_speed_m_s), positive, "> 0");
        add("scenario.acm_start_s", F(scenario.acm_start_s), non_negative, ">= 0");

        add_bool("profiles.flat", F(profiles.flat));
        add_str("profiles.irradiance_csv", F(profiles.irradiance_csv));
        add_str("profiles.wind_csv", F(profiles.wind_csv));
        add_str("profiles.load_csv", F(profiles.load_csv));
        add_str("output.dir", F(output_dir));
#undef F
        return t;
    }();
    return table;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto& table = key_table();
    auto it = table.find(key);
    if (it == table.end()) throw_config("unknown configuration key: " + key);
    it->second.set(*this, value);
}

std::string RunConfig::get(const std::string& key) const {
    const auto& table = key_table();
    auto it = table.find(key);
    if (it == table.end()) throw_config("unknown configuration key: " + key);
    return it->second.get(*this);
}

std::vector<std::string> RunConfig::known_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, _] : key_table()) keys.push_back(k);
    return keys;
}

void RunConfig::validate() const {
    sim.validate();
    if (fleet.soc_min >= fleet.soc_max)
        throw_config("fleet.soc_min must be below fleet.soc_max");
    if (scenario.pv_event_end_s < scenario.pv_event_start_s)
        throw_config("scenario.pv_event_end_s must be >= scenario.pv_event_start_s");
    if (pv.sunset_s <= pv.sunrise_s) throw_config("pv.sunset_s must be after pv.sunrise_s");
    if (wind.v_reconnect_m_s > wind.v_trip_m_s)
        throw_config("wind.v_reconnect_m_s must be <= wind.v_trip_m_s");
    if (controller.lambda <= 0.0 || controller.lambda >= 2.0)
        throw_config("controller.lambda must lie in (0, 2)");
    if (controller.mu <= 0.0 || controller.mu >= 2.0)
        throw_config("controller.mu must lie in (0, 2)");
}

static RunConfig parse_config_stream(std::istream& in, const std::string& origin,
                                     const std::vector<std::pair<std::string, std::string>>& flags) {
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw_config(origin + ":" + std::to_string(lineno) + ": expected `key = value`");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty())
            throw_config(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.set(key, value);
    }
    for (const auto& [k, v] : flags) cfg.set(k, v);
    cfg.validate();
    return cfg;
}

RunConfig parse_config(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& flag_overrides) {
    if (path.empty()) {
        std::istringstream empty;
        return parse_config_stream(empty, "<defaults>", flag_overrides);
    }
    std::ifstream in(path);
    if (!in) throw_io("cannot open config file: " + path);
    return parse_config_stream(in, path, flag_overrides);
}

RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& flag_overrides) {
    std::istringstream in(text);
    return parse_config_stream(in, "<inline>", flag_overrides);
}

}  // namespace mgsim
