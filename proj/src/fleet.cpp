#include "mgsim/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "mgsim/errors.hpp"

namespace mgsim {

const char* to_string(FleetMode m) {
    switch (m) {
        case FleetMode::Charging: return "charging";
        case FleetMode::Regulation: return "regulation";
        default: return "idle";
    }
}

bool EvUnit::plugged(double t_s) const {
    for (const auto& iv : plug_schedule)
        if (t_s >= iv.begin_s && t_s < iv.end_s) return true;
    return false;
}

namespace {

// Five availability templates: plug windows over the day plus an initial SOC
// anchor. Stand-ins for the five car profiles of the study fleet.
struct ProfileTemplate {
    double soc0;
    std::vector<PlugInterval> plug;
};

const std::vector<ProfileTemplate>& profile_templates() {
    static const std::vector<ProfileTemplate> tpl = {
        // 1: overnight-only charger
        {0.3, {{0.0, 28800.0}, {72000.0, 86400.0}}},
        // 2: commuter, plugged except the two commute windows
        {0.4, {{0.0, 21600.0}, {28800.0, 57600.0}, {64800.0, 86400.0}}},
        // 3: workplace-day
        {0.5, {{28800.0, 61200.0}}},
        // 4: home-based, out late afternoon
        {0.6, {{0.0, 57600.0}, {68400.0, 86400.0}}},
        // 5: always plugged
        {0.7, {{0.0, 86400.0}}},
    };
    return tpl;
}

}  // namespace

FleetState build_fleet(const FleetParams& params) {
    if (params.ev_count < 0) throw_config("fleet.ev_count must be >= 0");
    if (!params.roster_csv.empty()) return load_fleet_roster(params, params.roster_csv);
    FleetState fleet;
    fleet.params = params;
    const auto& tpl = profile_templates();
    int n = params.ev_count;
    int base = n / 5, rem = n % 5;
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> jitter(-0.02, 0.02);
    for (int p = 0; p < 5; ++p) {
        int count = base + (p < rem ? 1 : 0);  // remainder to the lowest ids
        for (int k = 0; k < count; ++k) {
            EvUnit u;
            u.profile_id = p + 1;
            u.capacity_kwh = params.capacity_kwh;
            u.p_charger_kw = params.charger_kw;
            u.plug_schedule = tpl[p].plug;
            u.soc = std::clamp(tpl[p].soc0 + jitter(rng), params.soc_min + 0.01,
                               params.soc_max - 0.01);
            fleet.units.push_back(std::move(u));
        }
    }
    return fleet;
}

FleetState load_fleet_roster(const FleetParams& params, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("cannot open fleet roster: " + path);
    FleetState fleet;
    fleet.params = params;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::vector<double> cols;
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                cols.push_back(std::stod(cell));
            } catch (const std::exception&) {
                cols.clear();
                break;
            }
        }
        if (cols.empty()) {
            if (lineno == 1) continue;  // header
            throw_config("malformed roster row in " + path + " line " + std::to_string(lineno));
        }
        if (cols.size() < 6 || cols.size() % 2 != 0)
            throw_config("roster row needs profile_id, capacity_kwh, charger_kw, initial_soc "
                         "and plug interval pairs (" + path + " line " + std::to_string(lineno) + ")");
        EvUnit u;
        u.profile_id = static_cast<int>(cols[0]);
        u.capacity_kwh = cols[1];
        u.p_charger_kw = cols[2];
        u.soc = cols[3];
        if (u.soc < params.soc_min || u.soc > params.soc_max)
            throw_config("roster initial_soc outside the SOC band (" + path + " line " +
                         std::to_string(lineno) + ")");
        for (std::size_t i = 4; i + 1 < cols.size(); i += 2)
            u.plug_schedule.push_back({cols[i], cols[i + 1]});
        fleet.units.push_back(std::move(u));
    }
    return fleet;
}

double se_percent(const FleetState& fleet, double t_s) {
    if (fleet.units.empty()) return 0.0;
    const double lo = fleet.params.soc_min, hi = fleet.params.soc_max;
    std::size_t avail = 0;
    for (const auto& u : fleet.units)
        if (u.plugged(t_s) && u.soc > lo && u.soc < hi) ++avail;
    return 100.0 * static_cast<double>(avail) / static_cast<double>(fleet.units.size());
}

DispatchLimits dispatchable_limits(const FleetState& fleet, double t_s) {
    const auto& p = fleet.params;
    double chg_kw = 0.0, dis_kw = 0.0;
    for (const auto& u : fleet.units) {
        if (!u.plugged(t_s)) continue;
        if (u.soc < p.soc_max) chg_kw += u.p_charger_kw;
        if (u.soc > p.soc_min) dis_kw += u.p_charger_kw;
    }
    double cap = p.p_cap_mw;
    if (p.cap_scales_with_count && !fleet.units.empty())
        cap *= static_cast<double>(fleet.units.size()) / 100.0;
    return {std::min(cap, chg_kw * 1e-3), std::min(cap, dis_kw * 1e-3)};
}

void aggregate_response_step(FleetState& fleet, double p_cmd_mw, double t_s, double dt_s) {
    const auto& p = fleet.params;
    if (!std::isfinite(p_cmd_mw)) throw_sim("aggregate_response_step: non-finite command");
    fleet.p_resp_mw += dt_s / p.t_ev_s * (p.k_ev * p_cmd_mw - fleet.p_resp_mw);
    DispatchLimits lim = dispatchable_limits(fleet, t_s);
    fleet.p_resp_mw = std::clamp(fleet.p_resp_mw, -lim.max_discharge_mw, lim.max_charge_mw);
}

void allocate_and_update_soc(FleetState& fleet, double t_s, double dt_s) {
    const auto& p = fleet.params;
    double total_kw = fleet.p_resp_mw * 1e3;
    if (total_kw == 0.0) return;
    bool charging = total_kw > 0.0;
    double remaining = std::abs(total_kw);

    struct Slot {
        EvUnit* u;
        double headroom;  // SOC distance to the relevant band edge
        double cap_kw;    // charger limit and band-crossing limit this step
    };
    std::vector<Slot> slots;
    slots.reserve(fleet.units.size());
    double cap_sum = 0.0;
    const double hours = dt_s / 3600.0;
    for (auto& u : fleet.units) {
        if (!u.plugged(t_s)) continue;
        double head = charging ? p.soc_max - u.soc : u.soc - p.soc_min;
        if (head <= 0.0) continue;
        // Power that would land the unit exactly on the band edge this step.
        double band_kw = head * u.capacity_kwh / (std::max(p.eta, 1e-12) * hours);
        double cap = std::min(u.p_charger_kw, band_kw);
        slots.push_back({&u, head, cap});
        cap_sum += cap;
    }
    // Hard physical bound: never schedule more than the roster can take.
    if (remaining > cap_sum) {
        remaining = cap_sum;
        fleet.p_resp_mw = (charging ? 1.0 : -1.0) * cap_sum * 1e-3;
    }

    std::vector<double> assigned(slots.size(), 0.0);
    std::vector<bool> done(slots.size(), false);
    // Pro-rata by headroom with water-filling over saturated chargers.
    for (int pass = 0; pass < 64 && remaining > 1e-12; ++pass) {
        double w = 0.0;
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (!done[i]) w += slots[i].headroom;
        if (w <= 0.0) break;
        bool saturated_any = false;
        double leftover = remaining;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (done[i]) continue;
            double share = remaining * slots[i].headroom / w;
            double room = slots[i].cap_kw - assigned[i];
            if (share >= room) {
                assigned[i] += room;
                leftover -= room;
                done[i] = true;
                saturated_any = true;
            }
        }
        if (!saturated_any) {
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (done[i]) continue;
                assigned[i] += remaining * slots[i].headroom / w;
            }
            leftover = 0.0;
        }
        remaining = std::max(leftover, 0.0);
    }

    double placed_kw = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        double pkw = assigned[i];
        placed_kw += pkw;
        double dsoc = (charging ? 1.0 : -1.0) * p.eta * pkw * hours / slots[i].u->capacity_kwh;
        slots[i].u->soc = std::clamp(slots[i].u->soc + dsoc, p.soc_min, p.soc_max);
    }
    double residual_mw = std::abs(std::abs(fleet.p_resp_mw) - placed_kw * 1e-3);
    fleet.max_alloc_residual_mw = std::max(fleet.max_alloc_residual_mw, residual_mw);
    if (residual_mw > 1e-9)
        throw_sim("fleet allocation residual " + std::to_string(residual_mw) + " MW at t = " +
                  std::to_string(t_s));
}

double mean_soc(const FleetState& fleet) {
    if (fleet.units.empty()) return 0.0;
    double s = 0.0;
    for (const auto& u : fleet.units) s += u.soc;
    return s / static_cast<double>(fleet.units.size());
}

}  // namespace mgsim
