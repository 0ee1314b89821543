#include "report/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "support/error.hpp"
#include "support/json_writer.hpp"

namespace pdmpstop {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key \"" + it.key() + "\" in " + where);
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: bad value for \"") + key + "\"");
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(j, "top level",
                   {"model", "horizon", "quantization", "dp", "stopping", "bounds", "simulate", "seed",
                    "output_dir"});

    RunConfig cfg;
    if (j.contains("model")) {
        const json& m = j.at("model");
        reject_unknown(m, "model", {"name", "v", "alpha", "rate_beta", "x0"});
        cfg.model.name = get_or<std::string>(m, "name", cfg.model.name);
        cfg.model.v = get_or<double>(m, "v", cfg.model.v);
        cfg.model.alpha = get_or<double>(m, "alpha", cfg.model.alpha);
        cfg.model.rate_beta = get_or<double>(m, "rate_beta", cfg.model.rate_beta);
        cfg.model.x0 = get_or<double>(m, "x0", cfg.model.x0);
    }
    cfg.horizon = get_or<int>(j, "horizon", cfg.horizon);
    if (j.contains("quantization")) {
        const json& q = j.at("quantization");
        reject_unknown(q, "quantization",
                       {"points_per_stage", "train_samples", "weight_samples", "eval_samples", "p",
                        "component_weights"});
        cfg.quantization.points_per_stage = get_or<int>(q, "points_per_stage", cfg.quantization.points_per_stage);
        cfg.quantization.train_samples = get_or<std::int64_t>(q, "train_samples", cfg.quantization.train_samples);
        cfg.quantization.weight_samples =
            get_or<std::int64_t>(q, "weight_samples", cfg.quantization.weight_samples);
        cfg.quantization.eval_samples = get_or<std::int64_t>(q, "eval_samples", cfg.quantization.eval_samples);
        cfg.quantization.p = get_or<double>(q, "p", cfg.quantization.p);
        if (q.contains("component_weights")) {
            auto w = q.at("component_weights").get<std::vector<double>>();
            if (w.size() != 2) throw ConfigError("config: component_weights must have two entries");
            cfg.quantization.component_weights = {w[0], w[1]};
        }
    }
    if (j.contains("dp")) {
        const json& d = j.at("dp");
        reject_unknown(d, "dp", {"delta"});
        cfg.dp.delta = get_or<double>(d, "delta", cfg.dp.delta);
    }
    if (j.contains("stopping")) {
        const json& s = j.at("stopping");
        reject_unknown(s, "stopping", {"a", "beta_override", "n_mc", "debug_dump"});
        cfg.stopping.a = get_or<double>(s, "a", cfg.stopping.a);
        if (s.contains("beta_override")) cfg.stopping.beta_override = s.at("beta_override").get<double>();
        cfg.stopping.n_mc = get_or<std::int64_t>(s, "n_mc", cfg.stopping.n_mc);
        cfg.stopping.debug_dump = get_or<bool>(s, "debug_dump", cfg.stopping.debug_dump);
    }
    if (j.contains("bounds")) {
        const json& b = j.at("bounds");
        reject_unknown(b, "bounds", {"enable_b2", "enable_b3"});
        cfg.bounds.enable_b2 = get_or<bool>(b, "enable_b2", cfg.bounds.enable_b2);
        cfg.bounds.enable_b3 = get_or<bool>(b, "enable_b3", cfg.bounds.enable_b3);
    }
    if (j.contains("simulate")) {
        const json& s = j.at("simulate");
        reject_unknown(s, "simulate", {"n_trajectories"});
        cfg.simulate.n_trajectories = get_or<int>(s, "n_trajectories", cfg.simulate.n_trajectories);
    }
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir);

    // validation
    if (cfg.model.name != "example" && cfg.model.name != "user-plugin")
        throw ConfigError("config: model.name must be \"example\" or \"user-plugin\"");
    if (cfg.horizon < 1) throw ConfigError("config: horizon must be >= 1");
    if (cfg.quantization.points_per_stage < 1) throw ConfigError("config: points_per_stage must be >= 1");
    if (cfg.quantization.train_samples < 1 || cfg.quantization.weight_samples < 1 ||
        cfg.quantization.eval_samples < 1)
        throw ConfigError("config: sample counts must be positive");
    if (!(cfg.quantization.p >= 1.0)) throw ConfigError("config: p must be >= 1");
    if (!(cfg.dp.delta > 0.0)) throw ConfigError("config: dp.delta must be positive");
    if (!(cfg.stopping.a > 0.0 && cfg.stopping.a < 1.0)) throw ConfigError("config: stopping.a must be in (0,1)");
    if (cfg.stopping.beta_override && !(*cfg.stopping.beta_override >= 0.0))
        throw ConfigError("config: beta_override must be nonnegative");
    if (cfg.stopping.n_mc < 1) throw ConfigError("config: n_mc must be positive");
    if (cfg.simulate.n_trajectories < 0) throw ConfigError("config: n_trajectories must be >= 0");
    if (cfg.output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
    JsonWriter w;
    w.begin_object();
    w.key("model");
    w.begin_object();
    w.kv("name", cfg.model.name);
    w.kv("v", cfg.model.v);
    w.kv("alpha", cfg.model.alpha);
    w.kv("rate_beta", cfg.model.rate_beta);
    w.kv("x0", cfg.model.x0);
    w.end_object();
    w.kv("horizon", cfg.horizon);
    w.key("quantization");
    w.begin_object();
    w.kv("points_per_stage", cfg.quantization.points_per_stage);
    w.kv("train_samples", static_cast<std::int64_t>(cfg.quantization.train_samples));
    w.kv("weight_samples", static_cast<std::int64_t>(cfg.quantization.weight_samples));
    w.kv("eval_samples", static_cast<std::int64_t>(cfg.quantization.eval_samples));
    w.kv("p", cfg.quantization.p);
    w.key("component_weights");
    w.array(std::vector<double>{cfg.quantization.component_weights[0], cfg.quantization.component_weights[1]});
    w.end_object();
    w.key("dp");
    w.begin_object();
    w.kv("delta", cfg.dp.delta);
    w.end_object();
    w.key("stopping");
    w.begin_object();
    w.kv("a", cfg.stopping.a);
    if (cfg.stopping.beta_override) w.kv("beta_override", *cfg.stopping.beta_override);
    w.kv("n_mc", static_cast<std::int64_t>(cfg.stopping.n_mc));
    w.kv("debug_dump", cfg.stopping.debug_dump);
    w.end_object();
    w.key("bounds");
    w.begin_object();
    w.kv("enable_b2", cfg.bounds.enable_b2);
    w.kv("enable_b3", cfg.bounds.enable_b3);
    w.end_object();
    w.key("simulate");
    w.begin_object();
    w.kv("n_trajectories", cfg.simulate.n_trajectories);
    w.end_object();
    w.kv("seed", cfg.seed);
    w.kv("output_dir", cfg.output_dir);
    w.end_object();
    return w.take();
}

}  // namespace pdmpstop
