#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

// Minimal JSON emitter with caller-controlled key order and floats printed
// at 17 significant digits, so reports are byte-stable and round-trip
// losslessly.
class JsonWriter {
public:
    void begin_object() {
        separate();
        out_ += '{';
        stack_.push_back(true);
    }
    void end_object() {
        out_ += '}';
        stack_.pop_back();
    }
    void begin_array() {
        separate();
        out_ += '[';
        stack_.push_back(true);
    }
    void end_array() {
        out_ += ']';
        stack_.pop_back();
    }

    void key(std::string_view name) {
        separate();
        append_string(name);
        out_ += ':';
        pending_value_ = true;
    }

    void value(std::string_view v) {
        separate();
        append_string(v);
    }
    void value(const char* v) { value(std::string_view(v)); }
    void value(bool v) {
        separate();
        out_ += v ? "true" : "false";
    }
    void value(double v) {
        separate();
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.17g", v);
        out_ += buffer;
    }
    void value(int v) { value(static_cast<std::int64_t>(v)); }
    void value(std::int64_t v) {
        separate();
        out_ += std::to_string(v);
    }
    void value(std::uint64_t v) {
        separate();
        out_ += std::to_string(v);
    }
    void null() {
        separate();
        out_ += "null";
    }

    const std::string& str() const { return out_; }

private:
    void separate() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!stack_.empty()) {
            if (!stack_.back()) out_ += ',';
            stack_.back() = false;
        }
    }

    void append_string(std::string_view s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                case '\b': out_ += "\\b"; break;
                case '\f': out_ += "\\f"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buffer[8];
                        std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
                        out_ += buffer;
                    } else {
                        out_ += c;
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> stack_;  // true while the container is still empty
    bool pending_value_ = false;
};

}  // namespace causal
