#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "report/config.hpp"

namespace pdmpstop {

// Reproducibility record for one output directory. The manifest is written
// before any result file (phase marked running) and rewritten when the phase
// finishes, so a crashed run leaves the failed phase identifiable. It holds
// wall-clock timings and is therefore not part of the byte-determinism
// surface; every other artifact is.
class RunManifest {
public:
    RunManifest(const RunConfig& cfg, std::string out_dir, std::string tool_version);

    void phase_start(const std::string& name);
    void phase_done(const std::string& name, double wall_seconds);
    void phase_failed(const std::string& name, const std::string& error);
    void record_artifact(const std::string& path);
    void note(const std::string& key, const std::string& value);
    void note_number(const std::string& key, double value);

    void write() const;  // rewrites <out_dir>/manifest.json

private:
    struct Phase {
        std::string name;
        std::string status;  // running | done | failed
        double wall_seconds = 0.0;
        std::string error;
    };
    RunConfig cfg_;
    std::string out_dir_;
    std::string tool_version_;
    std::vector<Phase> phases_;
    std::vector<std::string> artifacts_;
    std::vector<std::pair<std::string, std::string>> notes_;
    std::vector<std::pair<std::string, double>> number_notes_;
};

// Scoped helper: marks the phase running on construction and done (with
// timing) or failed on scope exit.
class PhaseScope {
public:
    PhaseScope(RunManifest& manifest, const std::string& name);
    ~PhaseScope();
    void fail(const std::string& error);

private:
    RunManifest& manifest_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
    bool failed_ = false;
};

}  // namespace pdmpstop
