// Command-line front end over the pdmpstop shared library. Orchestration
// lives behind the C API; this file only parses arguments and maps statuses
// to exit codes (0 ok, 2 config, 3 numeric, 4 i/o).

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdmpstop/pdmpstop.h"

namespace {

struct RunCloser {
    void operator()(pdmpstop_run* r) const { pdmpstop_run_close(r); }
};
using RunPtr = std::unique_ptr<pdmpstop_run, RunCloser>;

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    int threads = -1;  // -1: not given on the command line
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "Run configuration JSON");
    if (config_required) c->required();
    cmd->add_option("--seed", opts.seed, "Master seed override")->each([&](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_option("--out", opts.out_dir, "Output directory override");
    cmd->add_option("--threads", opts.threads, "Worker threads (0 = auto)");
}

int resolve_threads(int cli_threads) {
    if (cli_threads >= 0) return cli_threads;
    if (const char* env = std::getenv("PDMPSTOP_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 0) return static_cast<int>(v);
        std::fprintf(stderr, "warning: ignoring invalid PDMPSTOP_THREADS=%s\n", env);
    }
    return 0;
}

int open_run(const CommonOpts& opts, RunPtr& run) {
    pdmpstop_run* raw = nullptr;
    pdmpstop_status st = pdmpstop_run_open_file(opts.config_path.c_str(), &raw);
    run.reset(raw);
    if (st != PDMPSTOP_OK) {
        std::fprintf(stderr, "error: %s\n", raw ? pdmpstop_run_last_error(raw) : "cannot open config");
        return st;
    }
    if (opts.seed_set) pdmpstop_run_set_seed(run.get(), opts.seed);
    if (!opts.out_dir.empty()) {
        st = pdmpstop_run_set_output_dir(run.get(), opts.out_dir.c_str());
        if (st != PDMPSTOP_OK) {
            std::fprintf(stderr, "error: %s\n", pdmpstop_run_last_error(run.get()));
            return st;
        }
    }
    pdmpstop_run_set_threads(run.get(), resolve_threads(opts.threads));
    return PDMPSTOP_OK;
}

int finish(const RunPtr& run, pdmpstop_status st) {
    if (st != PDMPSTOP_OK) std::fprintf(stderr, "error: %s\n", pdmpstop_run_last_error(run.get()));
    return st;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal stopping of piecewise deterministic Markov processes by quantization"};
    app.set_version_flag("--version", pdmpstop_version());
    app.require_subcommand(1);

    CommonOpts sim_o, train_o, solve_o, eval_o, bounds_o, pipe_o;
    std::string bounds_grids, bounds_values;
    std::vector<std::string> report_dirs;
    std::string report_out;
    int report_threads = -1;

    auto* sim = app.add_subcommand("simulate", "Simulate trajectories; write CSV and SVG plot");
    add_common(sim, sim_o);
    auto* train = app.add_subcommand("train", "Train quantization grids, weights and error table");
    add_common(train, train_o);
    auto* solve = app.add_subcommand("solve", "Run the backward recursion on trained grids");
    add_common(solve, solve_o);
    auto* eval = app.add_subcommand("evaluate", "Monte-Carlo evaluation of the stopping rule");
    add_common(eval, eval_o);
    auto* bounds = app.add_subcommand("bounds", "Recompute the bound report from saved artifacts");
    add_common(bounds, bounds_o);
    bounds->add_option("--grids", bounds_grids, "Grids artifact (default <out>/grids.json)");
    bounds->add_option("--values", bounds_values, "Values artifact (default <out>/values.json)");
    auto* pipe = app.add_subcommand("pipeline", "Full chain: train, solve, evaluate, bounds, oracle");
    add_common(pipe, pipe_o);
    auto* report = app.add_subcommand("report", "Concatenate result rows from run directories");
    report->add_option("dirs", report_dirs, "Run output directories")->required();
    report->add_option("--out", report_out, "Write the table here instead of stdout");
    report->add_option("--threads", report_threads, "Accepted for symmetry; unused");

    CLI11_PARSE(app, argc, argv);

    RunPtr run;
    if (sim->parsed()) {
        if (int st = open_run(sim_o, run)) return st;
        return finish(run, pdmpstop_run_simulate(run.get()));
    }
    if (train->parsed()) {
        if (int st = open_run(train_o, run)) return st;
        return finish(run, pdmpstop_run_train(run.get()));
    }
    if (solve->parsed()) {
        if (int st = open_run(solve_o, run)) return st;
        return finish(run, pdmpstop_run_solve(run.get()));
    }
    if (eval->parsed()) {
        if (int st = open_run(eval_o, run)) return st;
        return finish(run, pdmpstop_run_evaluate(run.get()));
    }
    if (bounds->parsed()) {
        if (int st = open_run(bounds_o, run)) return st;
        return finish(run, pdmpstop_run_bounds(run.get(), bounds_grids.empty() ? nullptr : bounds_grids.c_str(),
                                               bounds_values.empty() ? nullptr : bounds_values.c_str()));
    }
    if (pipe->parsed()) {
        if (int st = open_run(pipe_o, run)) return st;
        pdmpstop_status st = pdmpstop_run_pipeline(run.get());
        if (st == PDMPSTOP_OK) {
            double v0h = 0, v0b = 0, b1 = 0, b2 = 0, b3 = 0, qe = 0, ov = 0;
            if (pdmpstop_run_results(run.get(), &v0h, &v0b, &b1, &b2, &b3, &qe, &ov) == PDMPSTOP_OK)
                std::printf("QE=%.4g V0_hat=%.4f V0_bar=%.4f B1=%.4f B2=%.4g B3=%.4g oracle_V0=%.4f\n", qe,
                            v0h, v0b, b1, b2, b3, ov);
        }
        return finish(run, st);
    }
    if (report->parsed()) {
        std::vector<const char*> dirs;
        for (const std::string& d : report_dirs) dirs.push_back(d.c_str());
        return pdmpstop_report(dirs.data(), dirs.size(), report_out.empty() ? nullptr : report_out.c_str());
    }
    return PDMPSTOP_ERR_CONFIG;
}
