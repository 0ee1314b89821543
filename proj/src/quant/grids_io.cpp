#include "quant/grids_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support/error.hpp"
#include "support/json_writer.hpp"

namespace pdmpstop {

std::string grids_to_json(const QuantizationGridSet& gs) {
    JsonWriter w;
    w.begin_object();
    w.kv("schema_version", kGridsSchemaVersion);
    w.kv("model_tag", gs.model_tag);
    w.kv("N", gs.N);
    w.kv("p", gs.p);
    w.key("component_weights");
    w.array(std::vector<double>{gs.component_weights[0], gs.component_weights[1]});
    w.kv("x0", gs.x0);

    w.key("stages");
    w.begin_array();
    for (const StageGrid& g : gs.stages) {
        w.begin_object();
        w.kv("stage", g.stage);
        w.key("codebook");
        w.begin_array();
        for (const Point2& pt : g.codebook) {
            w.begin_array();
            w.value(pt[0]);
            w.value(pt[1]);
            w.end_array();
        }
        w.end_array();
        w.key("weights");
        w.array(g.weights);
        w.kv("truncated", g.truncated);
        w.end_object();
    }
    w.end_array();

    w.key("transitions");
    w.begin_array();
    for (int k = 1; k <= gs.N; ++k) {
        w.begin_object();
        w.kv("stage", k);
        w.key("row_counts");
        w.begin_array();
        for (std::int64_t c : gs.row_counts[k]) w.value(c);
        w.end_array();
        w.key("rows");
        w.begin_array();
        for (const auto& row : gs.transitions[k]) {
            if (row.empty()) {
                w.begin_array();
                w.end_array();
            } else {
                w.array(row);
            }
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();

    w.key("errors");
    w.begin_object();
    w.key("e_Z");
    w.array(gs.errors.e_Z);
    w.key("e_S");
    w.array(gs.errors.e_S);
    w.key("e_Theta");
    w.array(gs.errors.e_Theta);
    w.kv("qe", gs.errors.qe);
    w.kv("samples", gs.errors.samples);
    w.end_object();

    w.key("training");
    w.begin_object();
    w.kv("master_seed", gs.training.master_seed);
    w.kv("stream_purpose", gs.training.stream_purpose);
    w.kv("train_samples", gs.training.train_samples);
    w.kv("weight_samples", gs.training.weight_samples);
    w.kv("error_samples", gs.training.error_samples);
    w.key("lloyd_iterations");
    w.array(gs.training.lloyd_iterations);
    w.key("final_distortion");
    w.array(gs.training.final_distortion);
    w.key("truncated_stages");
    w.array(gs.training.truncated_stages);
    w.end_object();

    w.end_object();
    std::string out = w.take();
    out += '\n';
    return out;
}

namespace {

using nlohmann::json;

std::vector<double> doubles(const json& j) { return j.get<std::vector<double>>(); }

}  // namespace

QuantizationGridSet grids_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed grids file: ") + e.what());
    }
    try {
        int version = j.at("schema_version").get<int>();
        if (version != kGridsSchemaVersion)
            throw IoError("grids file schema_version " + std::to_string(version) + " unsupported (expected " +
                          std::to_string(kGridsSchemaVersion) + ")");
        QuantizationGridSet gs;
        gs.model_tag = j.at("model_tag").get<std::string>();
        gs.N = j.at("N").get<int>();
        gs.p = j.at("p").get<double>();
        auto cw = doubles(j.at("component_weights"));
        if (cw.size() != 2) throw IoError("grids file: component_weights must have two entries");
        gs.component_weights = {cw[0], cw[1]};
        gs.x0 = j.at("x0").get<double>();

        const json& stages = j.at("stages");
        if (static_cast<int>(stages.size()) != gs.N + 1)
            throw IoError("grids file: expected " + std::to_string(gs.N + 1) + " stages");
        gs.stages.resize(gs.N + 1);
        for (int k = 0; k <= gs.N; ++k) {
            const json& st = stages.at(k);
            StageGrid& g = gs.stages[k];
            g.stage = st.at("stage").get<int>();
            for (const json& pt : st.at("codebook")) {
                auto v = doubles(pt);
                if (v.size() != 2) throw IoError("grids file: codebook points must be pairs");
                g.codebook.push_back({v[0], v[1]});
            }
            g.weights = doubles(st.at("weights"));
            if (g.weights.size() != g.codebook.size())
                throw IoError("grids file: weights/codebook size mismatch at stage " + std::to_string(k));
            double sum = 0.0;
            for (double x : g.weights) sum += x;
            if (std::abs(sum - 1.0) > 1e-9)
                throw NumericError("grids file: stage " + std::to_string(k) + " weights sum to " +
                                   std::to_string(sum));
            g.truncated = st.at("truncated").get<bool>();
            g.rebuild_index();
        }

        gs.transitions.assign(gs.N + 1, {});
        gs.row_counts.assign(gs.N + 1, {});
        for (const json& tr : j.at("transitions")) {
            int k = tr.at("stage").get<int>();
            if (k < 1 || k > gs.N) throw IoError("grids file: transition stage out of range");
            auto counts = tr.at("row_counts").get<std::vector<std::int64_t>>();
            const json& rows = tr.at("rows");
            if (static_cast<int>(rows.size()) != gs.stages[k - 1].classes() ||
                static_cast<int>(counts.size()) != gs.stages[k - 1].classes())
                throw IoError("grids file: transition row count mismatch at stage " + std::to_string(k));
            gs.row_counts[k] = counts;
            auto& dst = gs.transitions[k];
            dst.resize(rows.size());
            for (std::size_t c = 0; c < rows.size(); ++c) {
                dst[c] = doubles(rows.at(c));
                if (counts[c] > 0) {
                    if (static_cast<int>(dst[c].size()) != gs.stages[k].size())
                        throw IoError("grids file: transition row length mismatch at stage " +
                                      std::to_string(k));
                    double sum = 0.0;
                    for (double x : dst[c]) {
                        if (x < 0.0)
                            throw NumericError("grids file: negative transition probability at stage " +
                                               std::to_string(k) + " class " + std::to_string(c));
                        sum += x;
                    }
                    if (std::abs(sum - 1.0) > 1e-9)
                        throw NumericError("grids file: transition row stage " + std::to_string(k) +
                                           " class " + std::to_string(c) + " sums to " + std::to_string(sum));
                }
            }
        }

        const json& err = j.at("errors");
        gs.errors.e_Z = doubles(err.at("e_Z"));
        gs.errors.e_S = doubles(err.at("e_S"));
        gs.errors.e_Theta = doubles(err.at("e_Theta"));
        gs.errors.qe = err.at("qe").get<double>();
        gs.errors.samples = err.at("samples").get<std::int64_t>();

        const json& tr = j.at("training");
        gs.training.master_seed = tr.at("master_seed").get<std::uint64_t>();
        gs.training.stream_purpose = tr.at("stream_purpose").get<std::string>();
        gs.training.train_samples = tr.at("train_samples").get<std::int64_t>();
        gs.training.weight_samples = tr.at("weight_samples").get<std::int64_t>();
        gs.training.error_samples = tr.at("error_samples").get<std::int64_t>();
        gs.training.lloyd_iterations = tr.at("lloyd_iterations").get<std::vector<int>>();
        gs.training.final_distortion = doubles(tr.at("final_distortion"));
        gs.training.truncated_stages = tr.at("truncated_stages").get<std::vector<int>>();
        return gs;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed grids file: ") + e.what());
    }
}

void save_grids(const QuantizationGridSet& grids, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << grids_to_json(grids);
    if (!out) throw IoError("write failed: " + path);
}

QuantizationGridSet load_grids(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return grids_from_json(ss.str());
}

}  // namespace pdmpstop
