#include "quant/grids.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "support/error.hpp"
#include "support/parallel.hpp"

namespace pdmpstop {

void StageGrid::rebuild_index() {
    const int n = size();
    for (int i = 1; i < n; ++i) {
        bool ordered = codebook[i - 1][0] < codebook[i][0] ||
                       (codebook[i - 1][0] == codebook[i][0] && codebook[i - 1][1] < codebook[i][1]);
        if (!ordered) throw NumericError("StageGrid: codebook must be lexicographically sorted");
    }
    z_order.resize(n);
    z_sorted.resize(n);
    // lex-sorted codebook means identity order is already z-ascending
    for (int i = 0; i < n; ++i) {
        z_order[i] = i;
        z_sorted[i] = codebook[i][0];
    }
    z_class.assign(n, 0);
    z_values.clear();
    for (int i = 0; i < n; ++i) {
        if (i == 0 || codebook[i][0] != codebook[i - 1][0]) z_values.push_back(codebook[i][0]);
        z_class[i] = static_cast<int>(z_values.size()) - 1;
    }
}

int project(const StageGrid& grid, const Point2& point, double p, const Point2& component_weights) {
    if (grid.codebook.empty()) throw NumericError("project: empty grid");
    return nearest_sorted(grid.codebook, grid.z_order, grid.z_sorted, point, p, component_weights);
}

int QuantizationGridSet::project(int stage, const Point2& point) const {
    return pdmpstop::project(stages[stage], point, p, component_weights);
}

namespace {

// simulate chains i in [0, count) under stream.with_index(i); clouds[k][i] = Theta_k^(i)
std::vector<std::vector<Point2>> simulate_clouds(const PdmpModel& model, double x0, int N,
                                                 std::int64_t count, const RngStream& stream) {
    std::vector<std::vector<Point2>> clouds(N + 1);
    for (auto& c : clouds) c.resize(count);
    parallel_chunks(static_cast<std::size_t>(count), [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            Trajectory tr = simulate_chain(model, x0, N, stream.with_index(i));
            for (int k = 0; k <= N; ++k) clouds[k][i] = {tr.z[k], tr.s[k]};
        }
    });
    return clouds;
}

void sort_and_finalize(StageGrid& grid) {
    std::sort(grid.codebook.begin(), grid.codebook.end(), [](const Point2& a, const Point2& b) {
        if (a[0] != b[0]) return a[0] < b[0];
        return a[1] < b[1];
    });
    grid.codebook.erase(std::unique(grid.codebook.begin(), grid.codebook.end()), grid.codebook.end());
    grid.rebuild_index();
}

}  // namespace

QuantizationGridSet train_grids(const PdmpModel& model, double x0, int N, int points_per_stage,
                                std::int64_t train_samples, double p, const RngStream& stream,
                                const Point2& component_weights) {
    if (points_per_stage < 1) throw ConfigError("train_grids: points_per_stage must be >= 1");
    if (train_samples < 100LL * points_per_stage)
        throw ConfigError("train_grids: need at least 100 training samples per codebook point");
    if (!(p >= 1.0)) throw ConfigError("train_grids: norm order p must be >= 1");

    QuantizationGridSet gs;
    gs.N = N;
    gs.p = p;
    gs.component_weights = component_weights;
    gs.x0 = x0;
    gs.model_tag = model.tag;
    gs.training.master_seed = stream.master_seed;
    gs.training.stream_purpose = stream.purpose;
    gs.training.train_samples = train_samples;
    gs.stages.resize(N + 1);
    gs.transitions.assign(N + 1, {});
    gs.row_counts.assign(N + 1, {});

    auto clouds = simulate_clouds(model, x0, N, train_samples, stream.sub("train"));

    // stage 0: deterministic singleton
    gs.stages[0].stage = 0;
    gs.stages[0].codebook = {{x0, 0.0}};
    gs.stages[0].weights = {1.0};
    gs.stages[0].rebuild_index();

    gs.training.lloyd_iterations.assign(N, 0);
    gs.training.final_distortion.assign(N, 0.0);

    for (int k = 1; k <= N; ++k) {
        const auto& cloud = clouds[k];
        StageGrid& grid = gs.stages[k];
        grid.stage = k;

        // degenerate support: shrink to the distinct points
        std::set<Point2> distinct;
        bool few = true;
        for (const Point2& pt : cloud) {
            distinct.insert(pt);
            if (static_cast<int>(distinct.size()) > points_per_stage) {
                few = false;
                break;
            }
        }
        if (few) {
            grid.codebook.assign(distinct.begin(), distinct.end());
            grid.truncated = static_cast<int>(distinct.size()) < points_per_stage;
            if (grid.truncated) gs.training.truncated_stages.push_back(k);
            sort_and_finalize(grid);
        } else {
            Rng init_rng(stream.sub("kmeans-init", static_cast<std::uint64_t>(k)));
            KMeansResult res = lloyd_2d(cloud, points_per_stage, p, component_weights, init_rng);
            gs.training.lloyd_iterations[k - 1] = res.iterations;
            gs.training.final_distortion[k - 1] = res.distortion;
            grid.codebook = std::move(res.centroids);
            sort_and_finalize(grid);
            if (grid.size() < points_per_stage) {
                grid.truncated = true;
                gs.training.truncated_stages.push_back(k);
            }
        }

        // marginal weights: cell masses of the final codebook
        std::vector<std::int64_t> counts(static_cast<std::size_t>(kReductionChunks) * grid.size(), 0);
        parallel_chunks(cloud.size(), [&](std::size_t chunk, std::size_t b, std::size_t e) {
            std::int64_t* cc = counts.data() + chunk * grid.size();
            for (std::size_t i = b; i < e; ++i) cc[gs.project(k, cloud[i])] += 1;
        });
        grid.weights.assign(grid.size(), 0.0);
        for (int j = 0; j < grid.size(); ++j) {
            std::int64_t total = 0;
            for (std::size_t chunk = 0; chunk < kReductionChunks; ++chunk)
                total += counts[chunk * grid.size() + j];
            grid.weights[j] = static_cast<double>(total) / static_cast<double>(cloud.size());
        }
    }
    return gs;
}

void estimate_transition_weights(const PdmpModel& model, QuantizationGridSet& grids,
                                 std::int64_t weight_samples, const RngStream& stream) {
    const int N = grids.N;
    grids.training.weight_samples = weight_samples;

    // phase 1: simulate and project (parallel)
    std::vector<std::vector<int>> proj(N + 1);
    for (auto& v : proj) v.resize(weight_samples);
    RngStream sub = stream.sub("weights");
    parallel_chunks(static_cast<std::size_t>(weight_samples),
                    [&](std::size_t, std::size_t b, std::size_t e) {
                        for (std::size_t i = b; i < e; ++i) {
                            Trajectory tr = simulate_chain(model, grids.x0, N, sub.with_index(i));
                            for (int k = 0; k <= N; ++k) proj[k][i] = grids.project(k, {tr.z[k], tr.s[k]});
                        }
                    });

    // phase 2: count pairs keyed by the z-class of the previous stage
    for (int k = 1; k <= N; ++k) {
        const StageGrid& prev = grids.stages[k - 1];
        const StageGrid& cur = grids.stages[k];
        std::vector<std::vector<std::int64_t>> counts(prev.classes(),
                                                      std::vector<std::int64_t>(cur.size(), 0));
        std::vector<std::int64_t> row_total(prev.classes(), 0);
        for (std::int64_t i = 0; i < weight_samples; ++i) {
            int cls = prev.z_class[proj[k - 1][i]];
            counts[cls][proj[k][i]] += 1;
            row_total[cls] += 1;
        }
        auto& rows = grids.transitions[k];
        rows.assign(prev.classes(), {});
        grids.row_counts[k].assign(prev.classes(), 0);
        for (int c = 0; c < prev.classes(); ++c) {
            grids.row_counts[k][c] = row_total[c];
            if (row_total[c] == 0) continue;  // unreachable row, left empty
            rows[c].resize(cur.size());
            for (int j = 0; j < cur.size(); ++j)
                rows[c][j] = static_cast<double>(counts[c][j]) / static_cast<double>(row_total[c]);
        }
    }
}

ErrorTable estimate_errors(const PdmpModel& model, QuantizationGridSet& grids, std::int64_t eval_samples,
                           double p, const RngStream& stream) {
    const int N = grids.N;
    ErrorTable table;
    table.samples = eval_samples;
    table.e_Z.assign(N + 1, 0.0);
    table.e_S.assign(N + 1, 0.0);
    table.e_Theta.assign(N + 1, 0.0);

    std::vector<std::vector<double>> az(N + 1, std::vector<double>(kReductionChunks, 0.0));
    std::vector<std::vector<double>> as(N + 1, std::vector<double>(kReductionChunks, 0.0));
    std::vector<std::vector<double>> at(N + 1, std::vector<double>(kReductionChunks, 0.0));
    RngStream sub = stream.sub("errors");
    parallel_chunks(static_cast<std::size_t>(eval_samples), [&](std::size_t chunk, std::size_t b,
                                                                std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            Trajectory tr = simulate_chain(model, grids.x0, N, sub.with_index(i));
            for (int k = 0; k <= N; ++k) {
                Point2 pt{tr.z[k], tr.s[k]};
                const Point2& cb = grids.stages[k].codebook[grids.project(k, pt)];
                double dz = std::abs(pt[0] - cb[0]);
                double ds = std::abs(pt[1] - cb[1]);
                double dzp = std::pow(dz, p), dsp = std::pow(ds, p);
                az[k][chunk] += dzp;
                as[k][chunk] += dsp;
                at[k][chunk] += dzp + dsp;  // (p-norm of the pair)^p
            }
        }
    });
    double qe = 0.0;
    for (int k = 0; k <= N; ++k) {
        double sz = 0.0, ss = 0.0, st = 0.0;
        for (std::size_t chunk = 0; chunk < kReductionChunks; ++chunk) {
            sz += az[k][chunk];
            ss += as[k][chunk];
            st += at[k][chunk];
        }
        double inv = 1.0 / static_cast<double>(eval_samples);
        table.e_Z[k] = std::pow(sz * inv, 1.0 / p);
        table.e_S[k] = std::pow(ss * inv, 1.0 / p);
        table.e_Theta[k] = std::pow(st * inv, 1.0 / p);
        qe = std::max(qe, table.e_Theta[k]);
    }
    table.qe = qe;
    grids.errors = table;
    grids.training.error_samples = eval_samples;
    return table;
}

}  // namespace pdmpstop
