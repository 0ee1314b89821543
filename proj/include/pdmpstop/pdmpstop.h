/*
 * pdmpstop - numerical optimal stopping for piecewise deterministic Markov
 * processes: quantization of the embedded chain, discretized backward
 * dynamic programming, a computable stopping rule, and error-bound reports.
 *
 * C API over the shared library. All functions return pdmpstop_status; the
 * status values double as process exit codes (0 ok, 2 config, 3 numeric,
 * 4 i/o). A run handle wraps one validated configuration plus its output
 * directory; handles are not thread-safe, but distinct handles may be used
 * concurrently.
 */

#ifndef PDMPSTOP_H
#define PDMPSTOP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PDMPSTOP_API __declspec(dllexport)
#else
#define PDMPSTOP_API __attribute__((visibility("default")))
#endif

typedef enum pdmpstop_status {
    PDMPSTOP_OK = 0,
    PDMPSTOP_ERR_CONFIG = 2,
    PDMPSTOP_ERR_NUMERIC = 3,
    PDMPSTOP_ERR_IO = 4
} pdmpstop_status;

typedef struct pdmpstop_run pdmpstop_run;

/* Library version string, e.g. "pdmpstop 0.1.0". */
PDMPSTOP_API const char* pdmpstop_version(void);

/* Creates a run handle from a config JSON document (text or file). On
 * failure the handle is still created so the error message can be read;
 * close it as usual. */
PDMPSTOP_API pdmpstop_status pdmpstop_run_open(const char* config_json, pdmpstop_run** out_run);
PDMPSTOP_API pdmpstop_status pdmpstop_run_open_file(const char* config_path, pdmpstop_run** out_run);
PDMPSTOP_API void pdmpstop_run_close(pdmpstop_run* run);

/* Message for the most recent failing call on this handle ("" if none). */
PDMPSTOP_API const char* pdmpstop_run_last_error(const pdmpstop_run* run);

/* Overrides applied on top of the loaded config. The thread cap is a
 * process-wide setting (0 = auto); results are byte-identical for every
 * value of it. */
PDMPSTOP_API pdmpstop_status pdmpstop_run_set_seed(pdmpstop_run* run, uint64_t seed);
PDMPSTOP_API pdmpstop_status pdmpstop_run_set_output_dir(pdmpstop_run* run, const char* dir);
PDMPSTOP_API pdmpstop_status pdmpstop_run_set_threads(pdmpstop_run* run, int threads);

/* Subcommand entry points; artifacts land in the run's output directory. */
PDMPSTOP_API pdmpstop_status pdmpstop_run_simulate(pdmpstop_run* run);
PDMPSTOP_API pdmpstop_status pdmpstop_run_train(pdmpstop_run* run);
PDMPSTOP_API pdmpstop_status pdmpstop_run_solve(pdmpstop_run* run);
PDMPSTOP_API pdmpstop_status pdmpstop_run_evaluate(pdmpstop_run* run);
PDMPSTOP_API pdmpstop_status pdmpstop_run_bounds(pdmpstop_run* run, const char* grids_path_or_null,
                                                 const char* values_path_or_null);
PDMPSTOP_API pdmpstop_status pdmpstop_run_pipeline(pdmpstop_run* run);

/* Key scalar results of the last pipeline/evaluate call on this handle.
 * Any pointer may be NULL. Returns PDMPSTOP_ERR_NUMERIC before a run. */
PDMPSTOP_API pdmpstop_status pdmpstop_run_results(const pdmpstop_run* run, double* v0_hat, double* v0_bar,
                                                  double* b1, double* b2, double* b3, double* qe,
                                                  double* oracle_v0);

/* Concatenates result rows from finished run directories into one CSV
 * table written to out_csv_path (NULL writes to stdout). Standalone. */
PDMPSTOP_API pdmpstop_status pdmpstop_report(const char* const* run_dirs, size_t n_dirs,
                                             const char* out_csv_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PDMPSTOP_H */
