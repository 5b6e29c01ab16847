#include "mgsim/mgsim.h"

#include <cstring>
#include <string>

#include "mgsim/config.hpp"
#include "mgsim/errors.hpp"
#include "mgsim/io.hpp"
#include "mgsim/scenario.hpp"
#include "oracles/oracles.hpp"

using mgsim::BatchResult;
using mgsim::RunConfig;
using mgsim::RunSummary;
using mgsim::SimTrace;

struct mgsim_config {
    RunConfig cfg;
};
struct mgsim_trace {
    SimTrace trace;
    double f_nom_hz;
};
struct mgsim_batch {
    BatchResult batch;
    double f_nom_hz;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return MGSIM_OK;
    } catch (const mgsim::Error& e) {
        return fail(e.code(), e.what());
    } catch (const std::exception& e) {
        return fail(MGSIM_ERR_SIM, e.what());
    }
}

void fill_summary(const RunSummary& s, mgsim_summary* out) {
    out->f_min_hz = s.f_min_hz;
    out->f_max_hz = s.f_max_hz;
    out->max_abs_dev_hz = s.max_abs_dev_hz;
    out->time_of_nadir_s = s.time_of_nadir_s;
    out->mode_duty_idle = s.mode_duty_idle;
    out->mode_duty_charging = s.mode_duty_charging;
    out->mode_duty_regulation = s.mode_duty_regulation;
    out->final_mean_soc = s.final_mean_soc;
    out->soc_min_seen = s.soc_min_seen;
    out->soc_max_seen = s.soc_max_seen;
    out->max_alloc_residual_mw = s.max_alloc_residual_mw;
    out->max_conservation_err_hz = s.max_conservation_err_hz;
}

const mgsim::BatchCell* cell_at(const mgsim_batch* batch, int s, int c) {
    if (!batch || s < 0 || s > 2 || c < 0 || c > 2) return nullptr;
    return &batch->batch.cells[static_cast<std::size_t>(s) * 3 + c];
}

}  // namespace

extern "C" {

const char* mgsim_version(void) { return "1.0.0"; }

const char* mgsim_last_error(void) { return g_last_error.c_str(); }

mgsim_config* mgsim_config_new(void) { return new mgsim_config{}; }

void mgsim_config_free(mgsim_config* cfg) { delete cfg; }

int mgsim_config_load(mgsim_config* cfg, const char* path) {
    if (!cfg || !path) return fail(MGSIM_ERR_ARG, "null argument");
    return guarded([&] {
        // Re-resolve from the file on top of the handle's current values.
        auto parsed = mgsim::parse_config(path);
        for (const auto& key : RunConfig::known_keys()) cfg->cfg.set(key, parsed.get(key));
        cfg->cfg.validate();
    });
}

int mgsim_config_set(mgsim_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return fail(MGSIM_ERR_ARG, "null argument");
    return guarded([&] { cfg->cfg.set(key, value); });
}

int mgsim_config_get(const mgsim_config* cfg, const char* key, char* buf, size_t bufsize) {
    if (!cfg || !key || !buf || bufsize == 0) return fail(MGSIM_ERR_ARG, "null argument");
    return guarded([&] {
        std::string v = cfg->cfg.get(key);
        if (v.size() + 1 > bufsize) mgsim::throw_config("buffer too small for " + std::string(key));
        std::memcpy(buf, v.c_str(), v.size() + 1);
    });
}

int mgsim_run(const mgsim_config* cfg, const char* scenario, const char* v2g_case,
              mgsim_trace** out_trace) {
    if (!cfg || !scenario || !v2g_case || !out_trace) return fail(MGSIM_ERR_ARG, "null argument");
    *out_trace = nullptr;
    return guarded([&] {
        auto id = mgsim::scenario_from_string(scenario);
        auto c = mgsim::case_from_string(v2g_case);
        auto trace = mgsim::run_scenario(cfg->cfg, id, c);
        if (!trace.completed) mgsim::throw_sim("simulation fault: " + trace.fault);
        *out_trace = new mgsim_trace{std::move(trace), cfg->cfg.sim.f_nom_hz};
    });
}

void mgsim_trace_free(mgsim_trace* trace) { delete trace; }

size_t mgsim_trace_samples(const mgsim_trace* trace) {
    return trace ? trace->trace.samples.size() : 0;
}

int mgsim_trace_summary(const mgsim_trace* trace, double f_nom_hz, mgsim_summary* out) {
    if (!trace || !out) return fail(MGSIM_ERR_ARG, "null argument");
    return guarded([&] {
        double f = f_nom_hz > 0.0 ? f_nom_hz : trace->f_nom_hz;
        fill_summary(mgsim::summarize(trace->trace, f), out);
    });
}

int mgsim_trace_write_csv(const mgsim_trace* trace, const char* path) {
    if (!trace || !path) return fail(MGSIM_ERR_ARG, "null argument");
    return guarded([&] { mgsim::write_trace_csv(trace->trace, path); });
}

int mgsim_run_batch(const mgsim_config* cfg, mgsim_batch** out_batch) {
    if (!cfg || !out_batch) return fail(MGSIM_ERR_ARG, "null argument");
    *out_batch = nullptr;
    return guarded([&] {
        auto batch = mgsim::run_batch(cfg->cfg);
        *out_batch = new mgsim_batch{std::move(batch), cfg->cfg.sim.f_nom_hz};
    });
}

void mgsim_batch_free(mgsim_batch* batch) { delete batch; }

int mgsim_batch_summary(const mgsim_batch* batch, int scenario_idx, int case_idx,
                        mgsim_summary* out) {
    const auto* cell = cell_at(batch, scenario_idx, case_idx);
    if (!cell || !out) return fail(MGSIM_ERR_ARG, "bad handle or index");
    if (!cell->summary) return fail(MGSIM_ERR_SIM, cell->error);
    fill_summary(*cell->summary, out);
    g_last_error.clear();
    return MGSIM_OK;
}

int mgsim_batch_trace_write_csv(const mgsim_batch* batch, int scenario_idx, int case_idx,
                                const char* path) {
    const auto* cell = cell_at(batch, scenario_idx, case_idx);
    if (!cell || !path) return fail(MGSIM_ERR_ARG, "bad handle or index");
    return guarded([&] { mgsim::write_trace_csv(cell->trace, path); });
}

int mgsim_batch_write_json(const mgsim_batch* batch, const char* path) {
    if (!batch || !path) return fail(MGSIM_ERR_ARG, "null argument");
    return guarded([&] { mgsim::write_summary_json(batch->batch, path); });
}

int mgsim_batch_write_table(const mgsim_batch* batch, const char* path) {
    if (!batch || !path) return fail(MGSIM_ERR_ARG, "null argument");
    return guarded([&] { mgsim::write_summary_table(batch->batch, path); });
}

int mgsim_emit_plot_script(const char* const* trace_csv_paths, size_t n_paths,
                           const char* out_path) {
    if (!trace_csv_paths || !out_path) return fail(MGSIM_ERR_ARG, "null argument");
    return guarded([&] {
        std::vector<std::string> paths(trace_csv_paths, trace_csv_paths + n_paths);
        mgsim::emit_plot_script(paths, out_path);
    });
}

int mgsim_oracles_report(char* buf, size_t bufsize) {
    if (!buf || bufsize == 0) return fail(MGSIM_ERR_ARG, "null argument");
    return guarded([&] {
        std::string r = mgsim::oracles::report();
        if (r.size() + 1 > bufsize) r.resize(bufsize - 1);
        std::memcpy(buf, r.c_str(), r.size() + 1);
    });
}

}  // extern "C"
