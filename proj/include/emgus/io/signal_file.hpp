#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emgus/core/errors.hpp"
#include "emgus/core/timed_series.hpp"
#include "emgus/dsp/trigger.hpp"
#include "emgus/io/format.hpp"

namespace emgus::io {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

/// Spacing tolerance for CSV timestamps.
inline constexpr double kUniformTolS = 1e-9;

inline fs::path sidecar_path(const fs::path& payload) {
    fs::path p = payload;
    p.replace_extension(".json");
    return p;
}

inline void write_text(const fs::path& path, std::string_view text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) throw IoError("write failed: " + path.string());
}

inline std::string read_text(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline void write_json(const fs::path& path, const ojson& j) { write_text(path, j.dump(2) + "\n"); }

inline ojson read_json(const fs::path& path) {
    const std::string text = read_text(path);
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

/// CSV `t_s,value` plus a JSON sidecar with the sample rate, unit and provenance.
inline void write_series(const fs::path& csv_path, const TimedSeries& s, const ojson& provenance = ojson::object()) {
    std::string text = "t_s,value\n";
    text.reserve(text.size() + s.size() * 32);
    for (std::size_t i = 0; i < s.size(); ++i) {
        append_double(text, s.time_at(i));
        text += ',';
        append_double(text, s.values[i]);
        text += '\n';
    }
    write_text(csv_path, text);
    ojson side;
    side["sample_rate_hz"] = s.sample_rate_hz;
    side["start_s"] = s.start_s;
    side["unit"] = s.unit;
    side["samples"] = s.size();
    side["columns"] = {"t_s", "value"};
    side["provenance"] = provenance;
    write_json(sidecar_path(csv_path), side);
}

struct SeriesSidecar {
    double sample_rate_hz = 0.0;
    std::string unit = "V";
    std::optional<std::size_t> samples;
};

inline std::optional<SeriesSidecar> read_series_sidecar(const fs::path& csv_path) {
    const fs::path p = sidecar_path(csv_path);
    if (!fs::exists(p)) return std::nullopt;
    const ojson j = read_json(p);
    SeriesSidecar sc;
    try {
        sc.sample_rate_hz = j.at("sample_rate_hz").get<double>();
        if (j.contains("unit")) sc.unit = j.at("unit").get<std::string>();
        if (j.contains("samples")) sc.samples = j.at("samples").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(p.string() + ": " + e.what());
    }
    if (!std::isfinite(sc.sample_rate_hz) || !(sc.sample_rate_hz > 0.0))
        throw FormatError(p.string() + ": sample_rate_hz must be > 0");
    return sc;
}

/// Reads a `t_s,value` CSV. Rows must be finite and uniformly spaced; the sidecar, when
/// present, must agree with the spacing. A file with no rows yields an empty series.
inline TimedSeries read_series(const fs::path& csv_path) {
    const std::string text = read_text(csv_path);
    const auto sidecar = read_series_sidecar(csv_path);
    std::vector<double> t;
    std::vector<double> v;
    std::vector<std::size_t> lines;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            if (row != "t_s,value")
                throw FormatError(csv_path.string() + ": line " + std::to_string(lineno) + ": expected header t_s,value");
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw FormatError(csv_path.string() + ": line " + std::to_string(lineno) + ": expected two fields");
        const auto ts = parse_double(row.substr(0, comma));
        const auto val = parse_double(row.substr(comma + 1));
        if (!ts || !val)
            throw FormatError(csv_path.string() + ": line " + std::to_string(lineno) + ": unparseable number");
        if (!std::isfinite(*ts) || !std::isfinite(*val))
            throw FormatError(csv_path.string() + ": line " + std::to_string(lineno) + ": non-finite value");
        t.push_back(*ts);
        v.push_back(*val);
        lines.push_back(lineno);
    }

    TimedSeries s;
    s.unit = sidecar ? sidecar->unit : "V";
    s.start_s = t.empty() ? 0.0 : t.front();
    if (sidecar) {
        s.sample_rate_hz = sidecar->sample_rate_hz;
        if (sidecar->samples && *sidecar->samples != v.size())
            throw FormatError(csv_path.string() + ": sidecar sample count does not match CSV rows");
    } else if (t.size() >= 2) {
        if (!(t[1] > t[0]))
            throw FormatError(csv_path.string() + ": line " + std::to_string(lines[1]) + ": timestamps must increase");
        s.sample_rate_hz = 1.0 / (t[1] - t[0]);
    }
    const double dt = 1.0 / s.sample_rate_hz;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double tol = kUniformTolS + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t[i]);
        if (std::abs((t[i] - t[i - 1]) - dt) > tol) {
            throw FormatError(csv_path.string() + ": line " + std::to_string(lines[i]) +
                              ": timestamps are not uniform at 1/fs = " + format_double(dt) + " s");
        }
    }
    s.values = std::move(v);
    return s;
}

inline void write_trigger_edges(const fs::path& csv_path, const dsp::TriggerTrace& trace) {
    std::string text = "t_s,kind\n";
    for (const auto& e : trace.edges) {
        append_double(text, e.t_s);
        text += ',';
        text += dsp::to_string(e.kind);
        text += '\n';
    }
    write_text(csv_path, text);
}

inline dsp::TriggerTrace read_trigger_edges(const fs::path& csv_path) {
    const std::string text = read_text(csv_path);
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    dsp::TriggerTrace trace;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty() || lineno == 1) continue;
        const auto comma = row.find(',');
        const auto t = comma == std::string_view::npos ? std::nullopt : parse_double(row.substr(0, comma));
        const auto kind = comma == std::string_view::npos ? std::string_view{} : trim(row.substr(comma + 1));
        if (!t || (kind != "rising" && kind != "falling"))
            throw FormatError(csv_path.string() + ": line " + std::to_string(lineno) + ": malformed edge row");
        trace.edges.push_back({*t, kind == "rising" ? dsp::EdgeKind::rising : dsp::EdgeKind::falling});
    }
    return trace;
}

/// Raw little-endian float32 matrix, row-major.
inline void write_f32(const fs::path& path, std::span<const float> values) {
    std::string bytes;
    bytes.resize(values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto u = std::bit_cast<std::uint32_t>(values[i]);
        for (int b = 0; b < 4; ++b) bytes[i * 4 + static_cast<std::size_t>(b)] = static_cast<char>((u >> (8 * b)) & 0xFFu);
    }
    write_text(path, bytes);
}

inline std::vector<float> read_f32(const fs::path& path) {
    const std::string bytes = read_text(path);
    if (bytes.size() % 4 != 0) throw FormatError(path.string() + ": size is not a multiple of 4 bytes");
    std::vector<float> out(bytes.size() / 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint32_t u = 0;
        for (int b = 0; b < 4; ++b)
            u |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i * 4 + static_cast<std::size_t>(b)])) << (8 * b);
        out[i] = std::bit_cast<float>(u);
    }
    return out;
}

}  // namespace emgus::io
