#include "dp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "support/error.hpp"
#include "support/json_writer.hpp"
#include "support/parallel.hpp"

namespace pdmpstop {

namespace {

inline constexpr int kValuesSchemaVersion = 1;

const std::vector<double>& row_or_throw(const QuantizationGridSet& grids, int k, int z_class) {
    if (k < 1 || k > grids.N) throw NumericError("operator stage out of range");
    if (z_class < 0 || z_class >= grids.stages[k - 1].classes())
        throw NumericError("z-class out of range at stage " + std::to_string(k - 1));
    if (!grids.row_visited(k, z_class))
        throw AbsentRowError("no transition row for stage " + std::to_string(k - 1) + " z-class " +
                             std::to_string(z_class) + " (never visited during weight estimation)");
    return grids.transitions[k][z_class];
}

}  // namespace

double op_J_hat(const PdmpModel& model, const QuantizationGridSet& grids, int k, std::span<const double> w,
                int z_class, double s) {
    const auto& row = row_or_throw(grids, k, z_class);
    const StageGrid& cur = grids.stages[k];
    double z = grids.stages[k - 1].z_values[z_class];
    double g_stop = model.reward(model.flow(z, s));
    double acc = 0.0;
    for (int j = 0; j < cur.size(); ++j) {
        double pj = row[j];
        if (pj == 0.0) continue;
        if (cur.codebook[j][1] < s)
            acc += pj * w[cur.z_class[j]];
        else
            acc += pj * g_stop;
    }
    return acc;
}

double op_K_hat(const QuantizationGridSet& grids, int k, std::span<const double> w, int z_class) {
    const auto& row = row_or_throw(grids, k, z_class);
    const StageGrid& cur = grids.stages[k];
    double acc = 0.0;
    for (int j = 0; j < cur.size(); ++j) {
        if (row[j] != 0.0) acc += row[j] * w[cur.z_class[j]];
    }
    return acc;
}

LHatResult op_L_hat(const PdmpModel& model, const QuantizationGridSet& grids, int k,
                    std::span<const double> w, int z_class, const TimeGrid& grid) {
    double k_hat = op_K_hat(grids, k, w, z_class);

    // J_hat is evaluated per node with the same term order as op_K_hat, so a
    // constant w == g gives bit-exact equality and the strict flag stays off.
    double best_j = -std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    for (int i = 0; i <= grid.n; ++i) {
        double s = grid.node(i);
        double val = op_J_hat(model, grids, k, w, z_class, s);
        if (val > best_j) {
            best_j = val;
            best_s = s;  // strict improvement keeps the smallest maximizer
        }
    }

    LHatResult res;
    res.value = std::max(best_j, k_hat);
    res.s_star = best_s;
    res.continuation = k_hat > best_j;
    return res;
}

ValueTable backward_solve(const PdmpModel& model, const QuantizationGridSet& grids, double delta_request) {
    if (!(delta_request > 0.0)) throw ConfigError("backward_solve: delta must be positive");
    const int N = grids.N;
    if (grids.transitions.empty() || grids.transitions.size() != static_cast<std::size_t>(N) + 1)
        throw NumericError("backward_solve: transition weights not estimated");

    ValueTable table;
    table.N = N;
    table.delta_request = delta_request;
    table.v.resize(N + 1);
    table.defined.resize(N + 1);
    table.s_star.resize(N);
    table.cont_flag.resize(N);
    table.delta_norm.assign(N, 0.0);
    table.min_delta.assign(N, 0.0);

    // terminal stage: v_hat_N = g on Gamma^Z_N
    {
        const StageGrid& g = grids.stages[N];
        table.v[N].resize(g.classes());
        table.defined[N].assign(g.classes(), 1);
        for (int c = 0; c < g.classes(); ++c) table.v[N][c] = model.reward(g.z_values[c]);
    }

    for (int k = N; k >= 1; --k) {
        const StageGrid& prev = grids.stages[k - 1];
        const int nc = prev.classes();
        table.v[k - 1].assign(nc, 0.0);
        table.defined[k - 1].assign(nc, 0);
        table.s_star[k - 1].assign(nc, 0.0);
        table.cont_flag[k - 1].assign(nc, 0);

        // per-class time grids + Delta statistics under the stage marginal
        double norm_acc = 0.0;
        double min_delta = std::numeric_limits<double>::infinity();
        double weight_acc = 0.0;
        std::vector<TimeGrid> tgrids(nc);
        std::vector<double> class_weight(nc, 0.0);
        for (int j = 0; j < prev.size(); ++j) class_weight[prev.z_class[j]] += prev.weights[j];
        for (int c = 0; c < nc; ++c) {
            double z = prev.z_values[c];
            double ts = model.exit_time(z);
            tgrids[c] = build_time_grid(z, ts, delta_request);
            if (tgrids[c].delta < delta_request) table.clip_activations += 1;
            if (!grids.row_visited(k, c)) continue;  // unreachable classes excluded from statistics
            min_delta = std::min(min_delta, tgrids[c].delta);
            norm_acc += class_weight[c] * std::pow(tgrids[c].delta, grids.p);
            weight_acc += class_weight[c];
        }
        table.min_delta[k - 1] = std::isfinite(min_delta) ? min_delta : 0.0;
        table.delta_norm[k - 1] =
            weight_acc > 0.0 ? std::pow(norm_acc / weight_acc, 1.0 / grids.p) : 0.0;

        std::span<const double> w(table.v[k]);
        parallel_chunks(static_cast<std::size_t>(nc), [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t c = b; c < e; ++c) {
                if (!grids.row_visited(k, static_cast<int>(c))) continue;
                LHatResult r = op_L_hat(model, grids, k, w, static_cast<int>(c), tgrids[c]);
                table.v[k - 1][c] = r.value;
                table.s_star[k - 1][c] = r.s_star;
                table.cont_flag[k - 1][c] = r.continuation ? 1 : 0;
                table.defined[k - 1][c] = 1;
            }
        });
    }

    // stage-0 grid is the singleton {(x0,0)}; its single class carries V0
    if (table.defined[0].empty() || !table.defined[0][0])
        throw NumericError("backward_solve: stage-0 state unreachable");
    table.V0 = table.v[0][0];
    return table;
}

std::string values_to_json(const ValueTable& table, const QuantizationGridSet& grids) {
    JsonWriter w;
    w.begin_object();
    w.kv("schema_version", kValuesSchemaVersion);
    w.kv("N", table.N);
    w.kv("delta", table.delta_request);
    w.kv("V0_hat", table.V0);
    w.key("stages");
    w.begin_array();
    for (int k = 0; k <= table.N; ++k) {
        w.begin_object();
        w.kv("stage", k);
        w.key("z");
        std::vector<double> zs(grids.stages[k].z_values);
        w.array(zs);
        w.key("v_hat");
        w.array(table.v[k]);
        w.key("defined");
        w.array(table.defined[k]);
        if (k < table.N) {
            w.key("s_star");
            w.array(table.s_star[k]);
            w.key("continuation_flag");
            w.array(table.cont_flag[k]);
        }
        w.end_object();
    }
    w.end_array();
    w.key("delta_norm");
    w.array(table.delta_norm);
    w.key("min_delta");
    w.array(table.min_delta);
    w.kv("clip_activations", static_cast<std::int64_t>(table.clip_activations));
    w.end_object();
    std::string out = w.take();
    out += '\n';
    return out;
}

ValueTable values_from_json(const std::string& text, const QuantizationGridSet& grids) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed values file: ") + e.what());
    }
    try {
        int version = j.at("schema_version").get<int>();
        if (version != kValuesSchemaVersion)
            throw IoError("values file schema_version " + std::to_string(version) + " unsupported");
        ValueTable t;
        t.N = j.at("N").get<int>();
        if (t.N != grids.N) throw IoError("values file horizon does not match grids");
        t.delta_request = j.at("delta").get<double>();
        t.V0 = j.at("V0_hat").get<double>();
        t.v.resize(t.N + 1);
        t.defined.resize(t.N + 1);
        t.s_star.resize(t.N);
        t.cont_flag.resize(t.N);
        const json& stages = j.at("stages");
        for (int k = 0; k <= t.N; ++k) {
            const json& st = stages.at(k);
            t.v[k] = st.at("v_hat").get<std::vector<double>>();
            for (bool d : st.at("defined").get<std::vector<bool>>()) t.defined[k].push_back(d ? 1 : 0);
            if (static_cast<int>(t.v[k].size()) != grids.stages[k].classes())
                throw IoError("values file: stage " + std::to_string(k) + " size mismatch with grids");
            if (k < t.N) {
                t.s_star[k] = st.at("s_star").get<std::vector<double>>();
                for (bool f : st.at("continuation_flag").get<std::vector<bool>>())
                    t.cont_flag[k].push_back(f ? 1 : 0);
            }
        }
        t.delta_norm = j.at("delta_norm").get<std::vector<double>>();
        t.min_delta = j.at("min_delta").get<std::vector<double>>();
        t.clip_activations = j.at("clip_activations").get<std::int64_t>();
        return t;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed values file: ") + e.what());
    }
}

void save_values(const ValueTable& table, const QuantizationGridSet& grids, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << values_to_json(table, grids);
    if (!out) throw IoError("write failed: " + path);
}

ValueTable load_values(const std::string& path, const QuantizationGridSet& grids) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return values_from_json(ss.str(), grids);
}

}  // namespace pdmpstop
