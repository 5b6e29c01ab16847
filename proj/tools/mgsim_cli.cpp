// Command-line front end. Talks to the simulator only through the C API.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgsim/mgsim.h"

namespace {

struct ConfigGuard {
    mgsim_config* cfg = mgsim_config_new();
    ~ConfigGuard() { mgsim_config_free(cfg); }
};

int report(int rc, const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, mgsim_last_error());
    // Argument misuse surfaces as a configuration problem to the shell.
    return rc == MGSIM_ERR_ARG ? MGSIM_ERR_CONFIG : rc;
}

int apply_overrides(mgsim_config* cfg, const std::string& config_path,
                    const std::vector<std::string>& sets, double dt, double duration, int ev_count,
                    long long seed) {
    if (!config_path.empty()) {
        int rc = mgsim_config_load(cfg, config_path.c_str());
        if (rc != MGSIM_OK) return report(rc, "loading config");
    }
    auto set = [&](const char* key, const std::string& value) {
        int rc = mgsim_config_set(cfg, key, value.c_str());
        if (rc != MGSIM_OK) return report(rc, key);
        return 0;
    };
    for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            return MGSIM_ERR_CONFIG;
        }
        if (int rc = set(kv.substr(0, eq).c_str(), kv.substr(eq + 1))) return rc;
    }
    if (dt > 0.0 && set("sim.dt_s", std::to_string(dt))) return MGSIM_ERR_CONFIG;
    if (duration > 0.0 && set("sim.duration_s", std::to_string(duration))) return MGSIM_ERR_CONFIG;
    if (ev_count >= 0 && set("fleet.ev_count", std::to_string(ev_count))) return MGSIM_ERR_CONFIG;
    if (seed >= 0 && set("fleet.seed", std::to_string(seed))) return MGSIM_ERR_CONFIG;
    return 0;
}

std::string default_out_dir() {
    const char* env = std::getenv("MGSIM_OUT_DIR");
    return env && *env ? env : "out";
}

void print_summary(const mgsim_summary& s) {
    std::printf("f_min_hz               %.6f\n", s.f_min_hz);
    std::printf("f_max_hz               %.6f\n", s.f_max_hz);
    std::printf("max_abs_dev_hz         %.6f\n", s.max_abs_dev_hz);
    std::printf("time_of_nadir_s        %.2f\n", s.time_of_nadir_s);
    std::printf("mode duty i/c/r        %.4f / %.4f / %.4f\n", s.mode_duty_idle,
                s.mode_duty_charging, s.mode_duty_regulation);
    std::printf("final_mean_soc         %.4f\n", s.final_mean_soc);
    std::printf("soc range seen         [%.4f, %.4f]\n", s.soc_min_seen, s.soc_max_seen);
    std::printf("max_alloc_residual_mw  %.3e\n", s.max_alloc_residual_mw);
    std::printf("max_conservation_err   %.3e Hz\n", s.max_conservation_err_hz);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Microgrid frequency-regulation simulator"};
    app.set_version_flag("--version", mgsim_version());
    app.require_subcommand(1);

    std::string config_path, scenario = "pvdrop", v2g_case = "off", out_path, out_dir;
    std::vector<std::string> sets;
    double dt = -1.0, duration = -1.0;
    int ev_count = -1;
    long long seed = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value configuration file");
        cmd->add_option("--set", sets, "override a single key, key=value (repeatable)");
        cmd->add_option("--dt", dt, "integration step [s]");
        cmd->add_option("--duration", duration, "simulated horizon [s]");
        cmd->add_option("--seed", seed, "fleet SOC jitter seed");
    };

    auto* run = app.add_subcommand("run", "simulate one scenario/case cell");
    run->add_option("--scenario", scenario, "pvdrop | windtrip | acmstart (or 1..3)");
    run->add_option("--case", v2g_case, "off | ev100 | ev200");
    run->add_option("--ev-count", ev_count, "override fleet size for this run");
    run->add_option("--out", out_path, "trace CSV path (omit to skip the trace)");
    add_common(run);

    auto* batch = app.add_subcommand("batch", "all 3 scenarios x 3 V2G cases");
    batch->add_option("--out-dir", out_dir, "output directory (default $MGSIM_OUT_DIR or ./out)");
    add_common(batch);

    app.add_subcommand("oracle", "print independent reference computations");

    CLI11_PARSE(app, argc, argv);

    ConfigGuard guard;
    if (int rc = apply_overrides(guard.cfg, config_path, sets, dt, duration, ev_count, seed))
        return rc;

    if (run->parsed()) {
        mgsim_trace* trace = nullptr;
        int rc = mgsim_run(guard.cfg, scenario.c_str(), v2g_case.c_str(), &trace);
        if (rc != MGSIM_OK) return report(rc, "run");
        mgsim_summary s{};
        size_t n = mgsim_trace_samples(trace);
        rc = mgsim_trace_summary(trace, 0.0, &s);
        if (rc == MGSIM_OK && !out_path.empty()) rc = mgsim_trace_write_csv(trace, out_path.c_str());
        mgsim_trace_free(trace);
        if (rc != MGSIM_OK) return report(rc, "run output");
        std::printf("scenario %s, case %s, %zu samples\n", scenario.c_str(), v2g_case.c_str(), n);
        print_summary(s);
        return 0;
    }

    if (batch->parsed()) {
        std::string dir = out_dir.empty() ? default_out_dir() : out_dir;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            std::fprintf(stderr, "error: cannot create %s: %s\n", dir.c_str(),
                         ec.message().c_str());
            return MGSIM_ERR_IO;
        }
        mgsim_batch* b = nullptr;
        int rc = mgsim_run_batch(guard.cfg, &b);
        if (rc != MGSIM_OK) return report(rc, "batch");

        const char* scenarios[3] = {"pvdrop", "windtrip", "acmstart"};
        const char* cases[3] = {"off", "ev100", "ev200"};
        std::vector<std::string> csvs;
        for (int s = 0; s < 3 && rc == MGSIM_OK; ++s)
            for (int c = 0; c < 3 && rc == MGSIM_OK; ++c) {
                std::string path =
                    dir + "/trace_" + scenarios[s] + "_" + cases[c] + ".csv";
                rc = mgsim_batch_trace_write_csv(b, s, c, path.c_str());
                csvs.push_back(path);
            }
        if (rc == MGSIM_OK) rc = mgsim_batch_write_json(b, (dir + "/summary.json").c_str());
        if (rc == MGSIM_OK) rc = mgsim_batch_write_table(b, (dir + "/summary.txt").c_str());
        if (rc == MGSIM_OK) {
            std::vector<const char*> ptrs;
            for (const auto& p : csvs) ptrs.push_back(p.c_str());
            rc = mgsim_emit_plot_script(ptrs.data(), ptrs.size(),
                                        (dir + "/plot_frequency.py").c_str());
        }
        mgsim_batch_free(b);
        if (rc != MGSIM_OK) return report(rc, "batch output");
        std::printf("wrote %zu traces, summary.json, summary.txt, plot_frequency.py to %s\n",
                    csvs.size(), dir.c_str());
        return 0;
    }

    // oracle
    std::string buf(8192, '\0');
    int rc = mgsim_oracles_report(buf.data(), buf.size());
    if (rc != MGSIM_OK) return report(rc, "oracle");
    std::fputs(buf.c_str(), stdout);
    return 0;
}
