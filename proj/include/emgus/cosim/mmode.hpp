#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "emgus/core/errors.hpp"
#include "emgus/cosim/simulate.hpp"

namespace emgus::cosim {

/// Stack of A-mode envelopes, one row per frame, row-major.
struct MModeImage {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> data;
    std::vector<double> time_s;
    double depth_step_mm = 0.0;  // sample i sits at i * depth_step_mm

    std::span<const float> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
    double depth_mm(std::size_t col) const noexcept { return static_cast<double>(col) * depth_step_mm; }

    std::size_t argmax_col(std::size_t r) const {
        const auto v = row(r);
        return static_cast<std::size_t>(std::distance(v.begin(), std::max_element(v.begin(), v.end())));
    }

    /// Depth of the brightest bin at or beyond min_depth_mm.
    double brightest_depth_mm(std::size_t r, double min_depth_mm = 0.0) const {
        const auto v = row(r);
        auto first = static_cast<std::size_t>(std::ceil(min_depth_mm / depth_step_mm));
        first = std::min(first, cols - 1);
        const auto it = std::max_element(v.begin() + static_cast<std::ptrdiff_t>(first), v.end());
        return depth_mm(static_cast<std::size_t>(std::distance(v.begin(), it)));
    }
};

/// Smoothing length: the odd sample count nearest one carrier period.
inline std::size_t envelope_window(const synth::UsSynthConfig& cfg) {
    const double period = cfg.fs_hz / cfg.f_center_hz;
    auto w = static_cast<std::size_t>(std::max(1.0, 2.0 * std::round((period - 1.0) / 2.0) + 1.0));
    return w;
}

/// Envelope by rectification and a centered moving average over about one carrier period.
inline std::vector<float> scanline_envelope(std::span<const float> line, std::size_t window) {
    const auto half = static_cast<std::ptrdiff_t>(window / 2);
    const auto n = static_cast<std::ptrdiff_t>(line.size());
    std::vector<float> out(line.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto lo = std::max<std::ptrdiff_t>(0, i - half);
        const auto hi = std::min<std::ptrdiff_t>(n - 1, i + half);
        double s = 0.0;
        for (auto k = lo; k <= hi; ++k) s += std::abs(static_cast<double>(line[static_cast<std::size_t>(k)]));
        out[static_cast<std::size_t>(i)] = static_cast<float>(s / static_cast<double>(hi - lo + 1));
    }
    return out;
}

inline MModeImage build_mmode(const UsFrameSet& frames) {
    if (frames.empty()) throw ParameterError("build_mmode: frame set is empty");
    const auto& cfg = frames.config;
    const std::size_t window = envelope_window(cfg);
    MModeImage img;
    img.rows = frames.size();
    img.cols = cfg.samples_per_scanline;
    img.depth_step_mm = cfg.sample_depth_mm(1.0);
    img.data.reserve(img.rows * img.cols);
    img.time_s.reserve(img.rows);
    for (const auto& f : frames.frames) {
        if (f.scanline.size() != img.cols) throw ParameterError("build_mmode: scanline length mismatch");
        const auto env = scanline_envelope(f.scanline, window);
        img.data.insert(img.data.end(), env.begin(), env.end());
        img.time_s.push_back(f.t_s);
    }
    return img;
}

}  // namespace emgus::cosim
