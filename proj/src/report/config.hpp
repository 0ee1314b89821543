#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace pdmpstop {

// Parsed and validated run configuration. One JSON document, unknown keys
// rejected at every level.
struct RunConfig {
    struct Model {
        std::string name = "example";  // example | user-plugin
        double v = 1.0;
        double alpha = 1.0;
        double rate_beta = 3.0;
        double x0 = 0.0;
    } model;

    int horizon = 10;

    struct Quantization {
        int points_per_stage = 100;
        std::int64_t train_samples = 100000;
        std::int64_t weight_samples = 100000;
        std::int64_t eval_samples = 100000;
        double p = 2.0;
        std::array<double, 2> component_weights{1.0, 1.0};
    } quantization;

    struct Dp {
        double delta = 0.1;
    } dp;

    struct Stopping {
        double a = 0.5;
        std::optional<double> beta_override;
        std::int64_t n_mc = 100000;
        bool debug_dump = false;
    } stopping;

    struct Bounds {
        bool enable_b2 = true;
        bool enable_b3 = true;
    } bounds;

    struct Simulate {
        int n_trajectories = 2;
    } simulate;

    std::uint64_t seed = 0;
    std::string output_dir = "out";
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Canonical JSON echo of the configuration (deterministic formatting).
std::string config_to_json(const RunConfig& cfg);

}  // namespace pdmpstop
