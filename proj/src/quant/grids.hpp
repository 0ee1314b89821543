#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "quant/kmeans.hpp"
#include "support/rng.hpp"

namespace pdmpstop {

// Per-stage codebook for Theta_n = (Z_n, S_n) with marginal weights.
// Codebook points are lexicographically sorted by (z, s) and indexed in that
// order; z_class groups points sharing the same z-component (the multiset
// Gamma^Z_n), which is the conditioning unit for transition rows.
struct StageGrid {
    int stage = 0;
    std::vector<Point2> codebook;
    std::vector<double> weights;
    std::vector<int> z_class;        // codebook index -> class id
    std::vector<double> z_values;    // class id -> z value, ascending
    bool truncated = false;          // support had fewer distinct points than requested

    int size() const { return static_cast<int>(codebook.size()); }
    int classes() const { return static_cast<int>(z_values.size()); }
    // z-order of the sorted codebook, cached for nearest-neighbour pruning
    std::vector<int> z_order;
    std::vector<double> z_sorted;
    void rebuild_index();
};

struct ErrorTable {
    std::vector<double> e_Z, e_S, e_Theta;  // stages 0..N
    double qe = 0.0;                        // max over stages of e_Theta
    std::int64_t samples = 0;
    bool empty() const { return e_Theta.empty(); }
};

struct TrainingInfo {
    std::uint64_t master_seed = 0;
    std::string stream_purpose;
    std::int64_t train_samples = 0;
    std::int64_t weight_samples = 0;
    std::int64_t error_samples = 0;
    std::vector<int> lloyd_iterations;     // stages 1..N
    std::vector<double> final_distortion;  // stages 1..N
    std::vector<int> truncated_stages;
};

// Trained quantization of the embedded chain: per-stage grids, estimated
// transition rows P(Theta_hat_k = point_j | Z_hat_{k-1} in class i), and the
// Monte-Carlo error table.
struct QuantizationGridSet {
    int N = 0;
    double p = 2.0;
    Point2 component_weights{1.0, 1.0};
    double x0 = 0.0;
    std::string model_tag;
    std::vector<StageGrid> stages;  // 0..N

    // transitions[k] for k = 1..N (index 0 unused): row per stage-(k-1)
    // z-class over stage-k codebook indices. row_counts holds raw visit
    // counts; a zero count marks the row unreachable.
    std::vector<std::vector<std::vector<double>>> transitions;
    std::vector<std::vector<std::int64_t>> row_counts;

    ErrorTable errors;
    TrainingInfo training;

    bool row_visited(int k, int z_class) const { return row_counts[k][z_class] > 0; }
    int project(int stage, const Point2& point) const;
};

// Closest-neighbour projection onto the grid; exact distance ties resolve to
// the smallest codebook index.
int project(const StageGrid& grid, const Point2& point, double p, const Point2& component_weights);

// Trains per-stage codebooks by batch Lloyd on empirical clouds of Theta_n
// from train_samples simulated chains. Stage 0 is the deterministic
// singleton {(x0, 0)}.
QuantizationGridSet train_grids(const PdmpModel& model, double x0, int N, int points_per_stage,
                                std::int64_t train_samples, double p, const RngStream& stream,
                                const Point2& component_weights = {1.0, 1.0});

// Fills transition rows from weight_samples fresh chains.
void estimate_transition_weights(const PdmpModel& model, QuantizationGridSet& grids,
                                 std::int64_t weight_samples, const RngStream& stream);

// Monte-Carlo L^p distances per stage from fresh chains; stored on the grid
// set and returned. Distances are unweighted (component weights only shape
// the projection).
ErrorTable estimate_errors(const PdmpModel& model, QuantizationGridSet& grids, std::int64_t eval_samples,
                           double p, const RngStream& stream);

}  // namespace pdmpstop
