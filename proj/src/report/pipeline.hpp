#pragma once

#include <string>
#include <vector>

#include "bounds/bounds.hpp"
#include "core/model.hpp"
#include "dp/oracle.hpp"
#include "dp/solver.hpp"
#include "quant/grids.hpp"
#include "report/config.hpp"
#include "stopping/policy.hpp"

namespace pdmpstop {

std::string tool_version();

// Builds the model named by the config; "user-plugin" is a library-level
// feature and is rejected here with a config error.
PdmpModel model_from_config(const RunConfig& cfg);

struct PipelineResult {
    QuantizationGridSet grids;
    ValueTable values;
    BetaChoice beta;
    EvalReport eval;
    BoundReport bounds;
    bool oracle_supported = false;
    double oracle_v0 = 0.0;
    std::string result_row_csv;
};

// simulate: trajectory CSV + SVG plot of the requested number of paths.
void cmd_simulate(const RunConfig& cfg);

// train: grids + transition weights + error table -> grids.json.
void cmd_train(const RunConfig& cfg);

// solve: grids.json -> backward recursion -> values.json.
void cmd_solve(const RunConfig& cfg);

// evaluate: grids.json + values.json -> rule Monte Carlo -> evaluation.csv.
void cmd_evaluate(const RunConfig& cfg);

// bounds: recompute the bound report from persisted artifacts -> bounds.json.
// Empty paths default to <output_dir>/grids.json and <output_dir>/values.json.
void cmd_bounds(const RunConfig& cfg, const std::string& grids_path = "",
                const std::string& values_path = "");

// pipeline: the full chain, writing every artifact plus the tabular
// result row and the oracle reference when the model supports it.
PipelineResult cmd_pipeline(const RunConfig& cfg);

// report: concatenates result rows from finished run directories into one
// table. Returns the CSV text; writes it to out_path when nonempty.
std::string cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_path);

}  // namespace pdmpstop
