#include "support/json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace pdmpstop {

std::string JsonWriter::format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string JsonWriter::escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

void JsonWriter::comma() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!has_item_.empty()) {
        if (has_item_.back()) out_ += ',';
        has_item_.back() = true;
        indent();
    }
}

void JsonWriter::indent() {
    out_ += '\n';
    out_.append(2 * has_item_.size(), ' ');
}

void JsonWriter::begin_object() {
    comma();
    out_ += '{';
    has_item_.push_back(false);
}

void JsonWriter::end_object() {
    bool had = has_item_.back();
    has_item_.pop_back();
    if (had) indent();
    out_ += '}';
}

void JsonWriter::begin_array() {
    comma();
    out_ += '[';
    has_item_.push_back(false);
}

void JsonWriter::end_array() {
    bool had = has_item_.back();
    has_item_.pop_back();
    if (had) indent();
    out_ += ']';
}

void JsonWriter::key(const std::string& name) {
    comma();
    out_ += '"';
    out_ += escape(name);
    out_ += "\": ";
    pending_key_ = true;
}

void JsonWriter::value(double v) {
    comma();
    out_ += format_double(v);
}

void JsonWriter::value(std::int64_t v) {
    comma();
    out_ += std::to_string(v);
}

void JsonWriter::value(std::uint64_t v) {
    comma();
    out_ += std::to_string(v);
}

void JsonWriter::value(bool v) {
    comma();
    out_ += v ? "true" : "false";
}

void JsonWriter::value(const std::string& v) {
    comma();
    out_ += '"';
    out_ += escape(v);
    out_ += '"';
}

void JsonWriter::raw(const std::string& json_text) {
    comma();
    out_ += json_text;
}

void JsonWriter::array(const std::vector<double>& xs) {
    begin_array();
    for (double x : xs) value(x);
    end_array();
}

void JsonWriter::array(const std::vector<int>& xs) {
    begin_array();
    for (int x : xs) value(x);
    end_array();
}

void JsonWriter::array(const std::vector<char>& flags) {
    begin_array();
    for (char f : flags) value(static_cast<bool>(f));
    end_array();
}

}  // namespace pdmpstop
