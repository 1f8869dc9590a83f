#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "conclab/concentration.hpp"
#include "conclab/finder.hpp"
#include "conclab/nets.hpp"

namespace conclab {

/// Minimal JSON emitter with deterministic byte output: fixed key order is
/// the caller's, doubles are printed with 17 significant digits (lossless
/// round-trip), no whitespace. Reports must be byte-identical across runs
/// with the same seed, which rules out emitting through a general library
/// with its own formatting choices.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);
    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    /// Splices pre-serialized JSON (one complete value) into the stream.
    JsonWriter& raw(std::string_view json_text);

    const std::string& str() const { return out_; }

    static std::string format_double(double v);

private:
    void comma();
    void write_string(std::string_view v);
    std::string out_;
    std::vector<bool> pending_;  // per nesting level: needs a separator
};

std::string to_json(const Net& net);
Net net_from_json(const std::string& text);

std::string to_json(const ConcentrationReport& report);
ConcentrationReport concentration_report_from_json(const std::string& text);

std::string to_json(const DisintegrationReport& report);
DisintegrationReport disintegration_report_from_json(const std::string& text);

std::string to_json(const ConcentrationCertificate& cert);
ConcentrationCertificate certificate_from_json(const std::string& text);

}  // namespace conclab
