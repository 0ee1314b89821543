#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pdmpstop {

// Minimal streaming JSON emitter for the persisted artifacts. Keys keep
// insertion order and doubles are printed as decimal with 17 significant
// digits, which round-trips every finite double. nlohmann/json stays on the
// parse side; its serializer cannot be pinned to this number format.
class JsonWriter {
public:
    std::string take() { return std::move(out_); }

    void begin_object();
    void end_object();
    void begin_array();
    void end_array();
    void key(const std::string& name);

    void value(double v);
    void value(std::int64_t v);
    void value(std::uint64_t v);
    void value(int v) { value(static_cast<std::int64_t>(v)); }
    void value(bool v);
    void value(const std::string& v);
    void value(const char* v) { value(std::string(v)); }

    void kv(const std::string& name, double v) { key(name); value(v); }
    void kv(const std::string& name, std::int64_t v) { key(name); value(v); }
    void kv(const std::string& name, std::uint64_t v) { key(name); value(v); }
    void kv(const std::string& name, int v) { key(name); value(v); }
    void kv(const std::string& name, bool v) { key(name); value(v); }
    void kv(const std::string& name, const std::string& v) { key(name); value(v); }
    void kv(const std::string& name, const char* v) { key(name); value(v); }

    // splices pre-serialized JSON as the next value
    void raw(const std::string& json_text);

    void array(const std::vector<double>& xs);
    void array(const std::vector<int>& xs);
    void array(const std::vector<char>& flags);  // emitted as booleans

    static std::string escape(const std::string& s);
    static std::string format_double(double v);

private:
    void comma();
    void indent();

    std::string out_;
    std::vector<bool> has_item_;  // per nesting level
    bool pending_key_ = false;
};

}  // namespace pdmpstop
