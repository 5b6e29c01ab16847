/* C API for the microgrid frequency-regulation simulator.
 *
 * All entry points return an error code (MGSIM_OK on success); the last
 * failure message for the calling thread is available via mgsim_last_error().
 * Handles are opaque and must be released with their matching _free call.
 */
#ifndef MGSIM_H
#define MGSIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MGSIM_API __declspec(dllexport)
#else
#define MGSIM_API __attribute__((visibility("default")))
#endif

enum {
    MGSIM_OK = 0,
    MGSIM_ERR_CONFIG = 2,
    MGSIM_ERR_SIM = 3,
    MGSIM_ERR_IO = 4,
    MGSIM_ERR_ARG = 5, /* null handle / bad index */
};

typedef struct mgsim_config mgsim_config;
typedef struct mgsim_trace mgsim_trace;
typedef struct mgsim_batch mgsim_batch;

typedef struct mgsim_summary {
    double f_min_hz;
    double f_max_hz;
    double max_abs_dev_hz;
    double time_of_nadir_s;
    double mode_duty_idle;
    double mode_duty_charging;
    double mode_duty_regulation;
    double final_mean_soc;
    double soc_min_seen;
    double soc_max_seen;
    double max_alloc_residual_mw;
    double max_conservation_err_hz;
} mgsim_summary;

MGSIM_API const char* mgsim_version(void);

/* Message for the most recent failing call on this thread ("" if none). */
MGSIM_API const char* mgsim_last_error(void);

/* --- configuration ----------------------------------------------------- */

MGSIM_API mgsim_config* mgsim_config_new(void);
MGSIM_API void mgsim_config_free(mgsim_config* cfg);

/* Applies a `key = value` file on top of the current values. */
MGSIM_API int mgsim_config_load(mgsim_config* cfg, const char* path);
MGSIM_API int mgsim_config_set(mgsim_config* cfg, const char* key, const char* value);
MGSIM_API int mgsim_config_get(const mgsim_config* cfg, const char* key, char* buf, size_t bufsize);

/* --- single run --------------------------------------------------------- */

/* scenario: "pvdrop" | "windtrip" | "acmstart" (or "1".."3");
 * v2g_case: "off" | "ev100" | "ev200" (or "1".."3"). */
MGSIM_API int mgsim_run(const mgsim_config* cfg, const char* scenario, const char* v2g_case,
                        mgsim_trace** out_trace);
MGSIM_API void mgsim_trace_free(mgsim_trace* trace);
MGSIM_API size_t mgsim_trace_samples(const mgsim_trace* trace);
MGSIM_API int mgsim_trace_summary(const mgsim_trace* trace, double f_nom_hz, mgsim_summary* out);
MGSIM_API int mgsim_trace_write_csv(const mgsim_trace* trace, const char* path);

/* --- full 3x3 batch ----------------------------------------------------- */

MGSIM_API int mgsim_run_batch(const mgsim_config* cfg, mgsim_batch** out_batch);
MGSIM_API void mgsim_batch_free(mgsim_batch* batch);
/* scenario_idx, case_idx in 0..2, declaration order. Returns MGSIM_ERR_SIM
 * when that cell faulted (the cell error text goes to mgsim_last_error). */
MGSIM_API int mgsim_batch_summary(const mgsim_batch* batch, int scenario_idx, int case_idx,
                                  mgsim_summary* out);
MGSIM_API int mgsim_batch_trace_write_csv(const mgsim_batch* batch, int scenario_idx, int case_idx,
                                          const char* path);
MGSIM_API int mgsim_batch_write_json(const mgsim_batch* batch, const char* path);
MGSIM_API int mgsim_batch_write_table(const mgsim_batch* batch, const char* path);

/* --- utilities ---------------------------------------------------------- */

MGSIM_API int mgsim_emit_plot_script(const char* const* trace_csv_paths, size_t n_paths,
                                     const char* out_path);

/* Runs the independent brute-force reference computations (bisection diode
 * solve, MPP voltage sweep, analytic responses, hand-evaluated update
 * formulas) and writes a human-readable report into buf. */
MGSIM_API int mgsim_oracles_report(char* buf, size_t bufsize);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MGSIM_H */
