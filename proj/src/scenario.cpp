#include "mgsim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mgsim/errors.hpp"

namespace mgsim {

const char* to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::PvDrop: return "pvdrop";
        case ScenarioId::WindTrip: return "windtrip";
        case ScenarioId::AcmStart: return "acmstart";
    }
    return "?";
}

const char* to_string(CaseId id) {
    switch (id) {
        case CaseId::V2gOff: return "off";
        case CaseId::Ev100: return "ev100";
        case CaseId::Ev200: return "ev200";
    }
    return "?";
}

ScenarioId scenario_from_string(const std::string& s) {
    std::string v;
    for (char c : s) v += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (v == "pvdrop" || v == "pv" || v == "1" || v == "scenario1") return ScenarioId::PvDrop;
    if (v == "windtrip" || v == "wind" || v == "2" || v == "scenario2") return ScenarioId::WindTrip;
    if (v == "acmstart" || v == "acm" || v == "3" || v == "scenario3") return ScenarioId::AcmStart;
    throw_config("unknown scenario id: " + s);
}

CaseId case_from_string(const std::string& s) {
    std::string v;
    for (char c : s) v += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (v == "off" || v == "v2goff" || v == "1" || v == "0") return CaseId::V2gOff;
    if (v == "ev100" || v == "100" || v == "2") return CaseId::Ev100;
    if (v == "ev200" || v == "200" || v == "3") return CaseId::Ev200;
    throw_config("unknown case id: " + s);
}

ScenarioSpec build_scenario(ScenarioId id, CaseId case_id, const ScenarioParams& params) {
    ScenarioSpec spec;
    spec.id = id;
    spec.case_id = case_id;
    switch (case_id) {
        case CaseId::V2gOff: spec.ev_count = 0; break;
        case CaseId::Ev100: spec.ev_count = 100; break;
        case CaseId::Ev200: spec.ev_count = 200; break;
    }
    if (!params.events_enabled) return spec;
    switch (id) {
        case ScenarioId::PvDrop:
            spec.events.push_back({params.pv_event_start_s, "pv derate to " +
                                                                std::to_string(params.pv_derate)});
            spec.events.push_back({params.pv_event_end_s, "pv restore"});
            break;
        case ScenarioId::WindTrip:
            spec.events.push_back({params.wind_event_start_s,
                                   "wind gust to " + std::to_string(params.gust_speed_m_s) +
                                       " m/s"});
            spec.events.push_back(
                {params.wind_event_start_s + params.gust_duration_s, "wind returns to nominal"});
            break;
        case ScenarioId::AcmStart:
            spec.events.push_back({params.acm_start_s, "acm start"});
            break;
    }
    return spec;
}

RunSummary summarize(const SimTrace& trace, double f_nom_hz) {
    if (trace.samples.empty()) throw_sim("summarize: empty trace");
    RunSummary s;
    s.f_min_hz = s.f_max_hz = trace.samples.front().f_hz;
    s.time_of_nadir_s = trace.samples.front().t_s;
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& sample : trace.samples) {
        if (sample.f_hz < s.f_min_hz) {
            s.f_min_hz = sample.f_hz;
            s.time_of_nadir_s = sample.t_s;
        }
        s.f_max_hz = std::max(s.f_max_hz, sample.f_hz);
        ++counts[static_cast<int>(sample.mode)];
    }
    s.max_abs_dev_hz = std::max(std::abs(s.f_min_hz - f_nom_hz), std::abs(s.f_max_hz - f_nom_hz));
    auto total = static_cast<double>(trace.samples.size());
    s.mode_duty_idle = counts[0] / total;
    s.mode_duty_charging = counts[1] / total;
    s.mode_duty_regulation = counts[2] / total;
    s.final_mean_soc = trace.samples.back().mean_soc;
    s.soc_min_seen = trace.soc_min_seen;
    s.soc_max_seen = trace.soc_max_seen;
    s.max_alloc_residual_mw = trace.max_alloc_residual_mw;
    s.max_conservation_err_hz = trace.max_conservation_err_hz;
    return s;
}

Simulation make_simulation(const RunConfig& cfg, const ScenarioSpec& spec) {
    cfg.validate();
    Simulation sim;
    sim.cfg = cfg.sim;

    sim.diesel.p_rated_mw = cfg.diesel.p_rated_mw;
    sim.diesel.droop_r_pu = cfg.diesel.droop_r_pu;
    sim.diesel.t_gov_s = cfg.diesel.t_gov_s;
    sim.diesel.dispatch_t_s = cfg.diesel.dispatch_t_s;

    sim.pv.p_rated_mw = cfg.pv.p_rated_mw;
    sim.pv.cell = cfg.pv.cell;
    sim.pv.i_l_stc_a = cfg.pv.i_l_stc_a;
    sim.pv.mppt_dv_v = cfg.pv.mppt_dv_v;

    sim.wind.p_rated_mw = cfg.wind.p_rated_mw;
    sim.wind.rho_kg_m3 = cfg.wind.rho_kg_m3;
    sim.wind.cp = cfg.wind.cp;
    sim.wind.area_m2 = cfg.wind.area_m2;
    sim.wind.v_nominal_m_s = cfg.wind.v_nominal_m_s;
    sim.wind.v_trip_m_s = cfg.wind.v_trip_m_s;
    sim.wind.v_reconnect_m_s = cfg.wind.v_reconnect_m_s;

    sim.load.p_nominal_mw = cfg.load.p_nominal_mw;
    sim.load.power_factor = cfg.load.power_factor;

    sim.acm.s_rated_mva = cfg.acm.s_rated_mva;
    sim.acm.power_factor = cfg.acm.power_factor;
    sim.acm.inrush_factor = cfg.acm.inrush_factor;
    sim.acm.start_window_s = cfg.acm.start_window_s;
    sim.acm.start_time_s = cfg.scenario.acm_start_s;
    sim.acm.enabled = false;

    // Environment profiles: file overrides, then flat test mode, then defaults.
    if (cfg.profiles.flat) {
        sim.pv.irradiance = constant_profile(0.0, cfg.sim.duration_s);
        sim.wind.wind = constant_profile(cfg.wind.v_nominal_m_s, cfg.sim.duration_s);
        sim.load.profile = constant_profile(0.7, cfg.sim.duration_s);
    } else {
        sim.pv.irradiance = cfg.profiles.irradiance_csv.empty()
                                ? default_irradiance_profile(cfg.pv.sunrise_s, cfg.pv.sunset_s,
                                                             cfg.pv.peak_w_m2)
                                : load_profile_csv(cfg.profiles.irradiance_csv);
        sim.wind.wind = cfg.profiles.wind_csv.empty()
                            ? default_wind_profile(cfg.wind.v_nominal_m_s)
                            : load_profile_csv(cfg.profiles.wind_csv);
        sim.load.profile = cfg.profiles.load_csv.empty() ? default_load_profile()
                                                         : load_profile_csv(cfg.profiles.load_csv);
    }

    FleetParams fp = cfg.fleet;
    fp.ev_count = spec.ev_count;
    sim.fleet = build_fleet(fp);

    sim.ctrl_params = cfg.controller;
    sim.ctrl = ControllerState(cfg.controller.memory_len);

    // Scenario hooks (declaration order of the spec's timed events).
    ScenarioHooks hooks;
    if (cfg.scenario.events_enabled) {
        switch (spec.id) {
            case ScenarioId::PvDrop:
                hooks.pv_derate_active = true;
                hooks.pv_derate_start_s = cfg.scenario.pv_event_start_s;
                hooks.pv_derate_end_s = cfg.scenario.pv_event_end_s;
                hooks.pv_derate = cfg.scenario.pv_derate;
                break;
            case ScenarioId::WindTrip:
                hooks.gust_active = true;
                hooks.gust_start_s = cfg.scenario.wind_event_start_s;
                hooks.gust_end_s = cfg.scenario.wind_event_start_s + cfg.scenario.gust_duration_s;
                hooks.gust_speed_m_s = cfg.scenario.gust_speed_m_s;
                break;
            case ScenarioId::AcmStart:
                sim.acm.enabled = true;
                break;
        }
    }
    sim.hooks = hooks;
    return sim;
}

SimTrace run_scenario(const RunConfig& cfg, ScenarioId id, CaseId case_id) {
    ScenarioSpec spec = build_scenario(id, case_id, cfg.scenario);
    Simulation sim = make_simulation(cfg, spec);
    return sim.run();
}

const BatchCell& BatchResult::at(ScenarioId s, CaseId c) const {
    return cells[static_cast<std::size_t>(s) * 3 + static_cast<std::size_t>(c)];
}

BatchResult run_batch(const RunConfig& cfg) {
    BatchResult result;
    std::size_t idx = 0;
    for (int s = 0; s < 3; ++s) {
        for (int c = 0; c < 3; ++c, ++idx) {
            BatchCell& cell = result.cells[idx];
            cell.scenario = static_cast<ScenarioId>(s);
            cell.case_id = static_cast<CaseId>(c);
            try {
                cell.trace = run_scenario(cfg, cell.scenario, cell.case_id);
                if (!cell.trace.completed)
                    cell.error = cell.trace.fault;
                else
                    cell.summary = summarize(cell.trace, cfg.sim.f_nom_hz);
            } catch (const Error& e) {
                cell.error = e.what();
            }
        }
    }
    return result;
}

}  // namespace mgsim
