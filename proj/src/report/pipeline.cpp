#include "report/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "quant/grids_io.hpp"
#include "report/manifest.hpp"
#include "report/svg.hpp"
#include "support/error.hpp"
#include "support/fmt.hpp"
#include "support/json_writer.hpp"

namespace pdmpstop {

namespace fs = std::filesystem;

std::string tool_version() { return "pdmpstop 0.1.0"; }

PdmpModel model_from_config(const RunConfig& cfg) {
    if (cfg.model.name == "example") {
        PdmpModel m = make_example_model(cfg.model.v, cfg.model.alpha, cfg.model.rate_beta);
        if (!(cfg.model.x0 >= 0.0 && cfg.model.x0 < 1.0))
            throw ConfigError("config: example model needs x0 in [0,1)");
        return m;
    }
    throw ConfigError(
        "config: model \"user-plugin\" is a library-level feature; construct a PdmpModel and call the "
        "C++ API directly");
}

namespace {

RngStream root_stream(const RunConfig& cfg) { return RngStream(cfg.seed, "pdmpstop"); }

fs::path ensure_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct EvalArtifacts {
    BetaChoice beta;
    StoppingPolicy policy;
    EvalReport report;
};

EvalArtifacts evaluate_from(const PdmpModel& model, std::shared_ptr<const QuantizationGridSet> grids,
                            const ValueTable& values, const RunConfig& cfg, bool keep_outcomes) {
    double min_delta = std::numeric_limits<double>::infinity();
    for (double d : values.min_delta)
        if (d > 0.0) min_delta = std::min(min_delta, d);
    EvalArtifacts art;
    art.beta = choose_beta(model.constants, grids->errors, cfg.stopping.a, min_delta);
    double beta = cfg.stopping.beta_override ? *cfg.stopping.beta_override : art.beta.beta;
    art.policy = build_policy(values, grids, model, beta);
    art.report = evaluate_rule(model, art.policy, cfg.model.x0, cfg.stopping.n_mc, root_stream(cfg),
                               keep_outcomes);
    return art;
}

std::string evaluation_csv(const EvalReport& rep, double beta, bool feasible) {
    std::string out = "n_mc,V_bar_0,stderr,E_sup,B1,beta,feasible\n";
    out += std::to_string(rep.n_mc);
    out += ',';
    out += format_shortest(rep.v_bar);
    out += ',';
    out += format_shortest(rep.stderr_v);
    out += ',';
    out += format_shortest(rep.e_sup);
    out += ',';
    out += format_shortest(rep.b1);
    out += ',';
    out += format_shortest(beta);
    out += ',';
    out += feasible ? '1' : '0';
    out += '\n';
    return out;
}

std::string debug_dump_csv(const std::vector<StoppingOutcome>& outcomes) {
    std::string out = "traj_id,stop_stage,tau,reward,reason\n";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const StoppingOutcome& o = outcomes[i];
        out += std::to_string(i);
        out += ',';
        out += std::to_string(o.stage);
        out += ',';
        out += format_shortest(o.tau);
        out += ',';
        out += format_shortest(o.reward);
        out += ',';
        out += o.reason == StoppingOutcome::Reason::kThresholdBeforeJump ? "threshold-before-jump"
                                                                         : "exhausted-horizon";
        out += '\n';
    }
    return out;
}

BoundReport bounds_from(const PdmpModel& model, const QuantizationGridSet& grids, const ValueTable& values,
                        const RunConfig& cfg) {
    if (grids.errors.empty())
        throw NumericError("bounds: grids carry no error table; run the error estimation first");
    DerivedConstants dc = derive_constants(model.constants);
    LipschitzLedger ledger = lipschitz_ledger(model.constants, dc, grids.N);
    BoundReport rep = value_approximation_bound(ledger, model.constants, dc, grids.errors, values.delta_norm,
                                     values.min_delta);
    stopping_bound(rep, cfg.stopping.a);
    return rep;
}

std::string result_row(const RunConfig& cfg, double qe, double v0_hat, double v0_bar, double b1, double b2,
                       double b3) {
    std::string out = "Pt,QE,Delta,V0_hat,V0_bar,B1,B2,B3\n";
    out += std::to_string(cfg.quantization.points_per_stage);
    out += ',';
    out += format_shortest(qe);
    out += ',';
    out += format_shortest(cfg.dp.delta);
    out += ',';
    out += format_shortest(v0_hat);
    out += ',';
    out += format_shortest(v0_bar);
    out += ',';
    out += format_shortest(b1);
    out += ',';
    out += format_shortest(b2);
    out += ',';
    out += format_shortest(b3);
    out += '\n';
    return out;
}

}  // namespace

void cmd_simulate(const RunConfig& cfg) {
    PdmpModel model = model_from_config(cfg);
    fs::path dir = ensure_out_dir(cfg);
    RunManifest manifest(cfg, dir.string(), tool_version());
    PhaseScope phase(manifest, "simulate");
    try {
        std::vector<Trajectory> trajs;
        RngStream stream = root_stream(cfg).sub("simulate");
        for (int i = 0; i < cfg.simulate.n_trajectories; ++i)
            trajs.push_back(simulate_chain(model, cfg.model.x0, cfg.horizon, stream.with_index(i)));
        manifest.record_artifact("trajectories.csv");
        manifest.record_artifact("trajectories.svg");
        write_file(dir / "trajectories.csv", trajectories_to_csv(trajs));
        write_file(dir / "trajectories.svg", trajectories_to_svg(model, trajs));
    } catch (const std::exception& e) {
        phase.fail(e.what());
        throw;
    }
}

void cmd_train(const RunConfig& cfg) {
    PdmpModel model = model_from_config(cfg);
    fs::path dir = ensure_out_dir(cfg);
    RunManifest manifest(cfg, dir.string(), tool_version());
    PhaseScope phase(manifest, "train");
    try {
        RngStream root = root_stream(cfg);
        QuantizationGridSet grids =
            train_grids(model, cfg.model.x0, cfg.horizon, cfg.quantization.points_per_stage,
                        cfg.quantization.train_samples, cfg.quantization.p, root,
                        cfg.quantization.component_weights);
        estimate_transition_weights(model, grids, cfg.quantization.weight_samples, root);
        estimate_errors(model, grids, cfg.quantization.eval_samples, cfg.quantization.p, root);
        if (!grids.training.truncated_stages.empty())
            manifest.note("warning", "codebooks truncated to the distinct support at some stages");
        manifest.note_number("qe", grids.errors.qe);
        manifest.record_artifact("grids.json");
        save_grids(grids, (dir / "grids.json").string());
    } catch (const std::exception& e) {
        phase.fail(e.what());
        throw;
    }
}

void cmd_solve(const RunConfig& cfg) {
    PdmpModel model = model_from_config(cfg);
    fs::path dir = ensure_out_dir(cfg);
    RunManifest manifest(cfg, dir.string(), tool_version());
    PhaseScope phase(manifest, "solve");
    try {
        QuantizationGridSet grids = load_grids((dir / "grids.json").string());
        ValueTable values = backward_solve(model, grids, cfg.dp.delta);
        manifest.note_number("clip_activations", static_cast<double>(values.clip_activations));
        manifest.note_number("V0_hat", values.V0);
        manifest.record_artifact("values.json");
        save_values(values, grids, (dir / "values.json").string());
    } catch (const std::exception& e) {
        phase.fail(e.what());
        throw;
    }
}

void cmd_evaluate(const RunConfig& cfg) {
    PdmpModel model = model_from_config(cfg);
    fs::path dir = ensure_out_dir(cfg);
    RunManifest manifest(cfg, dir.string(), tool_version());
    PhaseScope phase(manifest, "evaluate");
    try {
        auto grids = std::make_shared<QuantizationGridSet>(load_grids((dir / "grids.json").string()));
        ValueTable values = load_values((dir / "values.json").string(), *grids);
        EvalArtifacts art = evaluate_from(model, grids, values, cfg, cfg.stopping.debug_dump);
        double beta_used = cfg.stopping.beta_override ? *cfg.stopping.beta_override : art.beta.beta;
        manifest.note_number("beta", beta_used);
        manifest.note_number("beta_feasible", art.beta.feasible ? 1.0 : 0.0);
        manifest.note_number("V0_bar", art.report.v_bar);
        manifest.record_artifact("evaluation.csv");
        write_file(dir / "evaluation.csv", evaluation_csv(art.report, beta_used, art.beta.feasible));
        if (cfg.stopping.debug_dump) {
            manifest.record_artifact("stopping_debug.csv");
            write_file(dir / "stopping_debug.csv", debug_dump_csv(art.report.outcomes));
        }
    } catch (const std::exception& e) {
        phase.fail(e.what());
        throw;
    }
}

void cmd_bounds(const RunConfig& cfg, const std::string& grids_path, const std::string& values_path) {
    PdmpModel model = model_from_config(cfg);
    fs::path dir = ensure_out_dir(cfg);
    RunManifest manifest(cfg, dir.string(), tool_version());
    PhaseScope phase(manifest, "bounds");
    try {
        fs::path gp = grids_path.empty() ? dir / "grids.json" : fs::path(grids_path);
        fs::path vp = values_path.empty() ? dir / "values.json" : fs::path(values_path);
        QuantizationGridSet grids = load_grids(gp.string());
        ValueTable values = load_values(vp.string(), grids);
        BoundReport rep = bounds_from(model, grids, values, cfg);
        manifest.note_number("B2", rep.b2_total);
        manifest.note_number("B3", rep.b3_total);
        manifest.record_artifact("bounds.json");
        write_file(dir / "bounds.json", bound_report_to_json(rep));
    } catch (const std::exception& e) {
        phase.fail(e.what());
        throw;
    }
}

PipelineResult cmd_pipeline(const RunConfig& cfg) {
    PdmpModel model = model_from_config(cfg);
    fs::path dir = ensure_out_dir(cfg);
    RunManifest manifest(cfg, dir.string(), tool_version());
    PipelineResult res;
    RngStream root = root_stream(cfg);

    auto run_phase = [&](const char* name, auto&& body) {
        PhaseScope phase(manifest, name);
        try {
            body();
        } catch (const std::exception& e) {
            phase.fail(e.what());
            throw;
        }
    };

    run_phase("train", [&] {
        res.grids = train_grids(model, cfg.model.x0, cfg.horizon, cfg.quantization.points_per_stage,
                                cfg.quantization.train_samples, cfg.quantization.p, root,
                                cfg.quantization.component_weights);
        if (!res.grids.training.truncated_stages.empty())
            manifest.note("warning", "codebooks truncated to the distinct support at some stages");
    });
    run_phase("weights", [&] {
        estimate_transition_weights(model, res.grids, cfg.quantization.weight_samples, root);
    });
    run_phase("errors", [&] {
        estimate_errors(model, res.grids, cfg.quantization.eval_samples, cfg.quantization.p, root);
        manifest.note_number("qe", res.grids.errors.qe);
        manifest.record_artifact("grids.json");
        save_grids(res.grids, (dir / "grids.json").string());
    });
    run_phase("solve", [&] {
        res.values = backward_solve(model, res.grids, cfg.dp.delta);
        manifest.note_number("clip_activations", static_cast<double>(res.values.clip_activations));
        manifest.note_number("V0_hat", res.values.V0);
        manifest.record_artifact("values.json");
        save_values(res.values, res.grids, (dir / "values.json").string());
    });

    auto grids_ptr = std::make_shared<const QuantizationGridSet>(res.grids);
    StoppingPolicy policy;
    run_phase("evaluate", [&] {
        double min_delta = std::numeric_limits<double>::infinity();
        for (double d : res.values.min_delta)
            if (d > 0.0) min_delta = std::min(min_delta, d);
        res.beta = choose_beta(model.constants, res.grids.errors, cfg.stopping.a, min_delta);
        double beta = cfg.stopping.beta_override ? *cfg.stopping.beta_override : res.beta.beta;
        policy = build_policy(res.values, grids_ptr, model, beta);
        res.eval = evaluate_rule(model, policy, cfg.model.x0, cfg.stopping.n_mc, root,
                                 cfg.stopping.debug_dump);
        manifest.note_number("beta", beta);
        manifest.note_number("beta_feasible", res.beta.feasible ? 1.0 : 0.0);
        manifest.note_number("V0_bar", res.eval.v_bar);
        manifest.record_artifact("evaluation.csv");
        write_file(dir / "evaluation.csv", evaluation_csv(res.eval, beta, res.beta.feasible));
        if (cfg.stopping.debug_dump) {
            manifest.record_artifact("stopping_debug.csv");
            write_file(dir / "stopping_debug.csv", debug_dump_csv(res.eval.outcomes));
        }
    });
    run_phase("bounds", [&] {
        res.bounds = bounds_from(model, res.grids, res.values, cfg);
        manifest.note_number("B2", res.bounds.b2_total);
        manifest.note_number("B3", res.bounds.b3_total);
        manifest.record_artifact("bounds.json");
        write_file(dir / "bounds.json", bound_report_to_json(res.bounds));
    });
    run_phase("oracle", [&] {
        res.oracle_supported = model.kernel_state_independent && model.kernel_expectation != nullptr;
        if (!res.oracle_supported) return;
        OracleResult oracle = continuous_oracle(model, cfg.model.x0, cfg.horizon);
        res.oracle_v0 = oracle.V0;
        manifest.note_number("oracle_V0", oracle.V0);
        manifest.record_artifact("oracle.json");
        manifest.record_artifact("oracle_mesh.csv");
        JsonWriter w;
        w.begin_object();
        w.kv("V0", oracle.V0);
        w.kv("state_mesh", static_cast<int>(oracle.mesh.size()));
        w.end_object();
        write_file(dir / "oracle.json", w.take() + "\n");
        write_file(dir / "oracle_mesh.csv", oracle_to_csv(oracle));
    });
    run_phase("report-row", [&] {
        res.result_row_csv = result_row(cfg, res.grids.errors.qe, res.values.V0, res.eval.v_bar,
                                        res.eval.b1, res.bounds.b2_total, res.bounds.b3_total);
        manifest.record_artifact("result_row.csv");
        write_file(dir / "result_row.csv", res.result_row_csv);
    });
    return res;
}

std::string cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_path) {
    std::string table = "Pt,QE,Delta,V0_hat,V0_bar,B1,B2,B3\n";
    for (const std::string& d : run_dirs) {
        std::string row = read_file(fs::path(d) / "result_row.csv");
        std::istringstream ss(row);
        std::string header, data;
        std::getline(ss, header);
        if (header != "Pt,QE,Delta,V0_hat,V0_bar,B1,B2,B3")
            throw IoError("unexpected result_row.csv header in " + d);
        std::getline(ss, data);
        table += data;
        table += '\n';
    }
    if (!out_path.empty()) write_file(out_path, table);
    return table;
}

}  // namespace pdmpstop
