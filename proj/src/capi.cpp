#include "pdmpstop/pdmpstop.h"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "report/config.hpp"
#include "report/pipeline.hpp"
#include "support/error.hpp"
#include "support/parallel.hpp"

using namespace pdmpstop;

struct pdmpstop_run {
    RunConfig cfg;
    std::string last_error;
    bool has_results = false;
    double v0_hat = NAN, v0_bar = NAN, b1 = NAN, b2 = NAN, b3 = NAN, qe = NAN, oracle_v0 = NAN;
};

namespace {

pdmpstop_status classify(const std::exception& e, pdmpstop_run* run) {
    if (run) run->last_error = e.what();
    if (auto* err = dynamic_cast<const Error*>(&e)) return static_cast<pdmpstop_status>(err->exit_code());
    return PDMPSTOP_ERR_NUMERIC;
}

template <typename Fn>
pdmpstop_status guarded(pdmpstop_run* run, Fn&& fn) {
    if (!run) return PDMPSTOP_ERR_CONFIG;
    try {
        run->last_error.clear();
        fn();
        return PDMPSTOP_OK;
    } catch (const std::exception& e) {
        return classify(e, run);
    } catch (...) {
        run->last_error = "unknown error";
        return PDMPSTOP_ERR_NUMERIC;
    }
}

}  // namespace

extern "C" {

const char* pdmpstop_version(void) {
    static const std::string v = tool_version();
    return v.c_str();
}

pdmpstop_status pdmpstop_run_open(const char* config_json, pdmpstop_run** out_run) {
    if (!config_json || !out_run) return PDMPSTOP_ERR_CONFIG;
    auto run = new pdmpstop_run;
    *out_run = run;
    try {
        run->cfg = parse_config(config_json);
        return PDMPSTOP_OK;
    } catch (const std::exception& e) {
        run->last_error = e.what();
        return PDMPSTOP_ERR_CONFIG;
    }
}

pdmpstop_status pdmpstop_run_open_file(const char* config_path, pdmpstop_run** out_run) {
    if (!config_path || !out_run) return PDMPSTOP_ERR_CONFIG;
    auto run = new pdmpstop_run;
    *out_run = run;
    try {
        run->cfg = load_config(config_path);
        return PDMPSTOP_OK;
    } catch (const std::exception& e) {
        return classify(e, run);
    }
}

void pdmpstop_run_close(pdmpstop_run* run) { delete run; }

const char* pdmpstop_run_last_error(const pdmpstop_run* run) {
    return run ? run->last_error.c_str() : "";
}

pdmpstop_status pdmpstop_run_set_seed(pdmpstop_run* run, uint64_t seed) {
    return guarded(run, [&] { run->cfg.seed = seed; });
}

pdmpstop_status pdmpstop_run_set_output_dir(pdmpstop_run* run, const char* dir) {
    if (!dir) return PDMPSTOP_ERR_CONFIG;
    return guarded(run, [&] {
        if (!*dir) throw ConfigError("output dir must not be empty");
        run->cfg.output_dir = dir;
    });
}

pdmpstop_status pdmpstop_run_set_threads(pdmpstop_run* run, int threads) {
    return guarded(run, [&] {
        if (threads < 0) throw ConfigError("threads must be >= 0");
        set_max_threads(threads);
    });
}

pdmpstop_status pdmpstop_run_simulate(pdmpstop_run* run) {
    return guarded(run, [&] { cmd_simulate(run->cfg); });
}

pdmpstop_status pdmpstop_run_train(pdmpstop_run* run) {
    return guarded(run, [&] { cmd_train(run->cfg); });
}

pdmpstop_status pdmpstop_run_solve(pdmpstop_run* run) {
    return guarded(run, [&] { cmd_solve(run->cfg); });
}

pdmpstop_status pdmpstop_run_evaluate(pdmpstop_run* run) {
    return guarded(run, [&] { cmd_evaluate(run->cfg); });
}

pdmpstop_status pdmpstop_run_bounds(pdmpstop_run* run, const char* grids_path_or_null,
                                    const char* values_path_or_null) {
    return guarded(run, [&] {
        cmd_bounds(run->cfg, grids_path_or_null ? grids_path_or_null : "",
                   values_path_or_null ? values_path_or_null : "");
    });
}

pdmpstop_status pdmpstop_run_pipeline(pdmpstop_run* run) {
    return guarded(run, [&] {
        PipelineResult res = cmd_pipeline(run->cfg);
        run->has_results = true;
        run->v0_hat = res.values.V0;
        run->v0_bar = res.eval.v_bar;
        run->b1 = res.eval.b1;
        run->b2 = res.bounds.b2_total;
        run->b3 = res.bounds.b3_total;
        run->qe = res.grids.errors.qe;
        run->oracle_v0 = res.oracle_supported ? res.oracle_v0 : NAN;
    });
}

pdmpstop_status pdmpstop_run_results(const pdmpstop_run* run, double* v0_hat, double* v0_bar, double* b1,
                                     double* b2, double* b3, double* qe, double* oracle_v0) {
    if (!run) return PDMPSTOP_ERR_CONFIG;
    if (!run->has_results) return PDMPSTOP_ERR_NUMERIC;
    if (v0_hat) *v0_hat = run->v0_hat;
    if (v0_bar) *v0_bar = run->v0_bar;
    if (b1) *b1 = run->b1;
    if (b2) *b2 = run->b2;
    if (b3) *b3 = run->b3;
    if (qe) *qe = run->qe;
    if (oracle_v0) *oracle_v0 = run->oracle_v0;
    return PDMPSTOP_OK;
}

pdmpstop_status pdmpstop_report(const char* const* run_dirs, size_t n_dirs, const char* out_csv_path) {
    try {
        std::vector<std::string> dirs;
        for (size_t i = 0; i < n_dirs; ++i) dirs.emplace_back(run_dirs[i]);
        std::string table = cmd_report(dirs, out_csv_path ? out_csv_path : "");
        if (!out_csv_path) std::fputs(table.c_str(), stdout);
        return PDMPSTOP_OK;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return static_cast<pdmpstop_status>(e.exit_code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return PDMPSTOP_ERR_NUMERIC;
    }
}

}  // extern "C"
