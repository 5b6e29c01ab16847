#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mgsim/config.hpp"
#include "mgsim/engine.hpp"

namespace mgsim {

enum class ScenarioId { PvDrop = 0, WindTrip = 1, AcmStart = 2 };
enum class CaseId { V2gOff = 0, Ev100 = 1, Ev200 = 2 };

const char* to_string(ScenarioId id);
const char* to_string(CaseId id);
ScenarioId scenario_from_string(const std::string& s);  // accepts name or 1/2/3
CaseId case_from_string(const std::string& s);          // accepts name or off/100/200

struct TimedEvent {
    double t_s;
    std::string what;
};

struct ScenarioSpec {
    ScenarioId id = ScenarioId::PvDrop;
    CaseId case_id = CaseId::V2gOff;
    std::vector<TimedEvent> events;  // declaration order; ties resolve in it
    int ev_count = 0;
};

ScenarioSpec build_scenario(ScenarioId id, CaseId case_id, const ScenarioParams& params);

struct RunSummary {
    double f_min_hz = 0.0;
    double f_max_hz = 0.0;
    double max_abs_dev_hz = 0.0;
    double time_of_nadir_s = 0.0;
    double mode_duty_idle = 0.0;
    double mode_duty_charging = 0.0;
    double mode_duty_regulation = 0.0;
    double final_mean_soc = 0.0;
    // Audit carried over from the trace.
    double soc_min_seen = 1.0;
    double soc_max_seen = 0.0;
    double max_alloc_residual_mw = 0.0;
    double max_conservation_err_hz = 0.0;
};

RunSummary summarize(const SimTrace& trace, double f_nom_hz);

/// Assembles a fully-configured Simulation for one scenario/case.
Simulation make_simulation(const RunConfig& cfg, const ScenarioSpec& spec);

SimTrace run_scenario(const RunConfig& cfg, ScenarioId id, CaseId case_id);

struct BatchCell {
    ScenarioId scenario;
    CaseId case_id;
    std::optional<RunSummary> summary;  // empty when the run faulted
    std::string error;
    SimTrace trace;
};

struct BatchResult {
    std::array<BatchCell, 9> cells;  // row-major (scenario, case) order
    const BatchCell& at(ScenarioId s, CaseId c) const;
};

/// Runs all nine (scenario, case) combinations. A faulting cell records its
/// error without aborting the siblings; results sit in declaration order.
BatchResult run_batch(const RunConfig& cfg);

}  // namespace mgsim
