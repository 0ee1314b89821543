#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "dp/time_grid.hpp"
#include "quant/grids.hpp"

namespace pdmpstop {

// Backward-recursion output: per stage k, values v_hat_k on the stage-k
// z-classes, and for k < N the smallest maximizing node of J_hat and the
// strict continuation comparison, which together drive the stopping rule.
struct ValueTable {
    int N = 0;
    double delta_request = 0.0;
    double V0 = 0.0;

    std::vector<std::vector<double>> v;        // [k][class], k = 0..N
    std::vector<std::vector<char>> defined;    // value available (row visited)
    std::vector<std::vector<double>> s_star;   // [k][class], k = 0..N-1
    std::vector<std::vector<char>> cont_flag;  // K_hat strictly exceeds max J_hat

    // time-grid statistics per stage 0..N-1, over reachable grid points
    std::vector<double> delta_norm;  // ||Delta(Z_hat_n)||_p under stage weights
    std::vector<double> min_delta;   // min Delta(z)
    std::int64_t clip_activations = 0;
};

// J_hat_k(w,g)(z,s): one-step stop value against the quantized stage-k law.
// `w` is indexed by stage-k z-class; `z_class` indexes stage-(k-1) classes.
double op_J_hat(const PdmpModel& model, const QuantizationGridSet& grids, int k, std::span<const double> w,
                int z_class, double s);

// K_hat_k(w)(z): continuation value.
double op_K_hat(const QuantizationGridSet& grids, int k, std::span<const double> w, int z_class);

struct LHatResult {
    double value = 0.0;
    double s_star = 0.0;    // smallest node attaining max J_hat
    bool continuation = false;  // K_hat strictly exceeds max J_hat
};

// L_hat_k^d(w,g)(z): max of J_hat over the grid, joined with K_hat.
LHatResult op_L_hat(const PdmpModel& model, const QuantizationGridSet& grids, int k,
                    std::span<const double> w, int z_class, const TimeGrid& grid);

// Runs v_hat_N = g, v_hat_{k-1} = L_hat_k^d(v_hat_k, g) down to stage 0 and
// records all argmax data. delta_request is the constant step, clipped
// per-point to t*(z)/2.
ValueTable backward_solve(const PdmpModel& model, const QuantizationGridSet& grids, double delta_request);

// JSON export of the value table (schema_version, per-stage arrays, V0_hat).
std::string values_to_json(const ValueTable& table, const QuantizationGridSet& grids);
ValueTable values_from_json(const std::string& text, const QuantizationGridSet& grids);
void save_values(const ValueTable& table, const QuantizationGridSet& grids, const std::string& path);
ValueTable load_values(const std::string& path, const QuantizationGridSet& grids);

}  // namespace pdmpstop
