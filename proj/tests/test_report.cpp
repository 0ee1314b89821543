#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "report/config.hpp"
#include "report/manifest.hpp"
#include "report/pipeline.hpp"
#include "report/svg.hpp"
#include "support/error.hpp"

using namespace pdmpstop;
namespace fs = std::filesystem;

namespace {

const char* kTinyConfig = R"({
  "model": {"name": "example", "v": 1.0, "alpha": 1.0, "rate_beta": 3.0, "x0": 0.0},
  "horizon": 2,
  "quantization": {"points_per_stage": 5, "train_samples": 600, "weight_samples": 1500,
                   "eval_samples": 1500, "p": 2.0},
  "dp": {"delta": 0.15},
  "stopping": {"a": 0.5, "n_mc": 1500},
  "seed": 4242,
  "output_dir": "OUT"
})";

RunConfig tiny_config(const fs::path& out) {
    RunConfig cfg = parse_config(kTinyConfig);
    cfg.output_dir = out.string();
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing: defaults, validation, unknown keys") {
    RunConfig cfg = parse_config(kTinyConfig);
    CHECK(cfg.model.name == "example");
    CHECK(cfg.horizon == 2);
    CHECK(cfg.quantization.points_per_stage == 5);
    CHECK(cfg.stopping.a == 0.5);
    CHECK_FALSE(cfg.stopping.beta_override.has_value());
    CHECK(cfg.simulate.n_trajectories == 2);  // default
    CHECK(cfg.seed == 4242);

    CHECK_THROWS_AS(parse_config("{nope"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"horizon": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"mystery": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"dp": {"delta": -1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"stopping": {"a": 1.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"name": "unknown"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"quantization": {"p": 0.5}})"), ConfigError);

    // canonical echo parses back to the same configuration
    RunConfig back = parse_config(config_to_json(cfg));
    CHECK(back.seed == cfg.seed);
    CHECK(back.dp.delta == cfg.dp.delta);
    CHECK(back.quantization.train_samples == cfg.quantization.train_samples);
}

TEST_CASE("user-plugin model is rejected with a config error at build time") {
    RunConfig cfg = parse_config(kTinyConfig);
    cfg.model.name = "user-plugin";
    CHECK_THROWS_AS(model_from_config(cfg), ConfigError);
}

TEST_CASE("manifest lifecycle: phases are recorded and crashes stay visible") {
    TempDir tmp("pdmpstop_manifest_test");
    RunConfig cfg = tiny_config(tmp.path);
    RunManifest manifest(cfg, tmp.path.string(), tool_version());
    manifest.phase_start("alpha");
    std::string mid = slurp(tmp.path / "manifest.json");
    CHECK(mid.find("\"alpha\"") != std::string::npos);
    CHECK(mid.find("\"running\"") != std::string::npos);
    manifest.phase_done("alpha", 0.25);
    manifest.phase_start("beta");
    manifest.phase_failed("beta", "exploded");
    std::string done = slurp(tmp.path / "manifest.json");
    CHECK(done.find("\"done\"") != std::string::npos);
    CHECK(done.find("\"failed\"") != std::string::npos);
    CHECK(done.find("exploded") != std::string::npos);
    CHECK(nlohmann::json::parse(done).at("config").at("seed") == 4242);
}

TEST_CASE("cmd_simulate writes the CSV and a deterministic SVG") {
    TempDir tmp("pdmpstop_sim_test");
    RunConfig cfg = tiny_config(tmp.path);
    cfg.horizon = 10;
    cmd_simulate(cfg);
    std::string csv = slurp(tmp.path / "trajectories.csv");
    CHECK(csv.rfind("traj_id,k,Z,S,T,boundary_forced\n", 0) == 0);
    std::string svg = slurp(tmp.path / "trajectories.svg");
    // two trajectories -> two paths, each with at most horizon move breaks
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
    std::size_t paths = 0, pos = 0;
    while ((pos = svg.find("<path", pos)) != std::string::npos) {
        ++paths;
        ++pos;
    }
    CHECK(paths == 2);
    std::size_t breaks = 0;
    pos = 0;
    while ((pos = svg.find(" M", pos)) != std::string::npos) {
        ++breaks;
        ++pos;
    }
    CHECK(breaks <= 2 * 10);

    // byte-identical on rerun
    cmd_simulate(cfg);
    CHECK(slurp(tmp.path / "trajectories.svg") == svg);
    CHECK(slurp(tmp.path / "trajectories.csv") == csv);

    // zero trajectories: header-only CSV, still a valid SVG
    cfg.simulate.n_trajectories = 0;
    cmd_simulate(cfg);
    CHECK(slurp(tmp.path / "trajectories.csv") == "traj_id,k,Z,S,T,boundary_forced\n");
    CHECK(slurp(tmp.path / "trajectories.svg").find("<svg") != std::string::npos);
}

TEST_CASE("sawtooth rendering for a zero-rate model stays within the plot") {
    PdmpModel m = make_example_model(1.0, 1.0, 3.0);
    m.jump_rate = [](double) { return 0.0; };
    m.hazard = [](double, double) { return 0.0; };
    m.hazard_inverse = nullptr;
    m.kernel_sample = [](double, double) { return 0.0; };
    std::vector<Trajectory> trajs{simulate_chain(m, 0.0, 4, RngStream(3, "saw"))};
    // jumps at integer multiples of t*(0) = 1
    for (int k = 1; k <= 4; ++k) CHECK(trajs[0].t[k] == doctest::Approx(1.0 * k));
    std::string svg = trajectories_to_svg(m, trajs);
    CHECK(svg.find("<path") != std::string::npos);
}

TEST_CASE("file-based subcommands chain through the artifacts") {
    TempDir tmp("pdmpstop_chain_test");
    RunConfig cfg = tiny_config(tmp.path);
    cmd_train(cfg);
    CHECK(fs::exists(tmp.path / "grids.json"));
    cmd_solve(cfg);
    CHECK(fs::exists(tmp.path / "values.json"));
    cmd_evaluate(cfg);
    std::string eval = slurp(tmp.path / "evaluation.csv");
    CHECK(eval.rfind("n_mc,V_bar_0,stderr,E_sup,B1,beta,feasible\n", 0) == 0);
    cmd_bounds(cfg);
    CHECK(fs::exists(tmp.path / "bounds.json"));

    // solving without grids in a fresh dir is an I/O error
    TempDir empty("pdmpstop_chain_empty");
    RunConfig cfg2 = tiny_config(empty.path);
    CHECK_THROWS_AS(cmd_solve(cfg2), IoError);
    CHECK_THROWS_AS(cmd_bounds(cfg2, "missing_grids.json", ""), IoError);
}

TEST_CASE("pipeline: full run, frozen row header, bounds round-trip, determinism") {
    TempDir tmp("pdmpstop_pipe_test");
    RunConfig cfg = tiny_config(tmp.path);
    PipelineResult res = cmd_pipeline(cfg);
    CHECK(res.oracle_supported);
    CHECK(res.result_row_csv.rfind("Pt,QE,Delta,V0_hat,V0_bar,B1,B2,B3\n", 0) == 0);
    for (const char* f : {"grids.json", "values.json", "evaluation.csv", "bounds.json", "oracle.json",
                          "oracle_mesh.csv", "result_row.csv", "manifest.json"})
        CHECK(fs::exists(tmp.path / f));

    // cmd_bounds on the persisted artifacts reproduces B2/B3 exactly
    std::string before = slurp(tmp.path / "bounds.json");
    cmd_bounds(cfg);
    CHECK(slurp(tmp.path / "bounds.json") == before);

    // rerun with the same seed: byte-identical result artifacts
    TempDir tmp2("pdmpstop_pipe_test2");
    RunConfig cfg2 = tiny_config(tmp2.path);
    cmd_pipeline(cfg2);
    for (const char* f : {"grids.json", "values.json", "evaluation.csv", "bounds.json", "oracle.json",
                          "oracle_mesh.csv", "result_row.csv"})
        CHECK(slurp(tmp.path / f) == slurp(tmp2.path / f));

    // a different seed changes the results
    RunConfig cfg3 = tiny_config(tmp2.path);
    cfg3.seed += 1;
    cmd_pipeline(cfg3);
    CHECK(slurp(tmp2.path / "grids.json") != slurp(tmp.path / "grids.json"));

    // report assembles rows from run directories
    std::string table = cmd_report({tmp.path.string()}, (tmp.path / "table.csv").string());
    CHECK(table.rfind("Pt,QE,Delta,V0_hat,V0_bar,B1,B2,B3\n", 0) == 0);
    CHECK(std::count(table.begin(), table.end(), '\n') == 2);
    CHECK(slurp(tmp.path / "table.csv") == table);
}

TEST_CASE("tampered grids artifact fails bounds with the row named") {
    TempDir tmp("pdmpstop_tamper_test");
    RunConfig cfg = tiny_config(tmp.path);
    cmd_train(cfg);
    cmd_solve(cfg);
    std::string text = slurp(tmp.path / "grids.json");
    auto j = nlohmann::json::parse(text);
    j["transitions"][0]["rows"][0][0] = 0.999;  // break the first visited row
    std::ofstream out(tmp.path / "grids.json", std::ios::binary);
    out << j.dump();
    out.close();
    try {
        cmd_bounds(cfg);
        FAIL("expected a validation error");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("sums to") != std::string::npos);
        CHECK(std::string(e.what()).find("stage 1") != std::string::npos);
    }
}
