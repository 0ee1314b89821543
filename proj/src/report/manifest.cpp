#include "report/manifest.hpp"

#include <fstream>

#include "support/error.hpp"
#include "support/json_writer.hpp"

namespace pdmpstop {

RunManifest::RunManifest(const RunConfig& cfg, std::string out_dir, std::string tool_version)
    : cfg_(cfg), out_dir_(std::move(out_dir)), tool_version_(std::move(tool_version)) {}

void RunManifest::phase_start(const std::string& name) {
    phases_.push_back({name, "running", 0.0, ""});
    write();
}

void RunManifest::phase_done(const std::string& name, double wall_seconds) {
    for (auto it = phases_.rbegin(); it != phases_.rend(); ++it) {
        if (it->name == name) {
            it->status = "done";
            it->wall_seconds = wall_seconds;
            break;
        }
    }
    write();
}

void RunManifest::phase_failed(const std::string& name, const std::string& error) {
    for (auto it = phases_.rbegin(); it != phases_.rend(); ++it) {
        if (it->name == name) {
            it->status = "failed";
            it->error = error;
            break;
        }
    }
    write();
}

void RunManifest::record_artifact(const std::string& path) { artifacts_.push_back(path); }

void RunManifest::note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }

void RunManifest::note_number(const std::string& key, double value) {
    number_notes_.emplace_back(key, value);
}

void RunManifest::write() const {
    JsonWriter w;
    w.begin_object();
    w.kv("tool", tool_version_);
    w.key("config");
    w.raw(config_to_json(cfg_));
    w.key("phases");
    w.begin_array();
    for (const Phase& p : phases_) {
        w.begin_object();
        w.kv("name", p.name);
        w.kv("status", p.status);
        w.kv("wall_seconds", p.wall_seconds);
        if (!p.error.empty()) w.kv("error", p.error);
        w.end_object();
    }
    w.end_array();
    w.key("artifacts");
    w.begin_array();
    for (const std::string& a : artifacts_) w.value(a);
    w.end_array();
    w.key("notes");
    w.begin_object();
    for (const auto& [k, v] : notes_) w.kv(k, v);
    for (const auto& [k, v] : number_notes_) w.kv(k, v);
    w.end_object();
    w.end_object();

    std::ofstream out(out_dir_ + "/manifest.json", std::ios::binary);
    if (!out) throw IoError("cannot write manifest in " + out_dir_);
    out << w.take() << '\n';
}

PhaseScope::PhaseScope(RunManifest& manifest, const std::string& name)
    : manifest_(manifest), name_(name), start_(std::chrono::steady_clock::now()) {
    manifest_.phase_start(name_);
}

PhaseScope::~PhaseScope() {
    if (failed_) return;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    manifest_.phase_done(name_, secs);
}

void PhaseScope::fail(const std::string& error) {
    failed_ = true;
    manifest_.phase_failed(name_, error);
}

}  // namespace pdmpstop
