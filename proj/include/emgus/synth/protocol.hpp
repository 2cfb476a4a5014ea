#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emgus/core/errors.hpp"

namespace emgus::synth {

enum class SegmentState { rest, contract };

inline std::string_view to_string(SegmentState s) noexcept {
    return s == SegmentState::rest ? "rest" : "contract";
}

struct Segment {
    SegmentState state = SegmentState::rest;
    double duration_s = 0.0;

    bool operator==(const Segment&) const = default;
};

/// One contraction: electrical activity from onset_s to offset_s.
struct ContractionInterval {
    double onset_s = 0.0;
    double offset_s = 0.0;

    bool operator==(const ContractionInterval&) const = default;
};

/// Ordered rest/contract segments repeated `repetitions` times.
struct ContractionProtocol {
    std::vector<Segment> segments;
    int repetitions = 1;

    std::vector<std::string> problems(const std::string& prefix = "protocol.") const {
        std::vector<std::string> out;
        if (segments.empty()) out.push_back(prefix + "segments must not be empty");
        for (std::size_t i = 0; i < segments.size(); ++i) {
            const double d = segments[i].duration_s;
            if (!std::isfinite(d) || !(d > 0.0))
                out.push_back(prefix + "segments[" + std::to_string(i) + "].duration_s must be > 0");
        }
        if (repetitions < 1) out.push_back(prefix + "repetitions must be >= 1");
        return out;
    }

    void validate() const {
        if (auto p = problems(); !p.empty()) throw ValidationError(std::move(p));
    }

    double period_s() const noexcept {
        double s = 0.0;
        for (const auto& seg : segments) s += seg.duration_s;
        return s;
    }

    double total_duration_s() const noexcept { return repetitions * period_s(); }

    /// Contraction intervals in time order; adjacent contract segments are merged.
    std::vector<ContractionInterval> contractions() const {
        std::vector<ContractionInterval> out;
        const double period = period_s();
        for (int r = 0; r < repetitions; ++r) {
            // Offsets from rep * period rather than a running sum, so long protocols do not drift.
            const double base = r * period;
            double offset = 0.0;
            for (const auto& seg : segments) {
                const double begin = base + offset;
                offset += seg.duration_s;
                if (seg.state != SegmentState::contract) continue;
                const double end = base + offset;
                if (!out.empty() && out.back().offset_s == begin) {
                    out.back().offset_s = end;
                } else {
                    out.push_back({begin, end});
                }
            }
        }
        return out;
    }

    std::vector<double> onsets_s() const {
        std::vector<double> out;
        for (const auto& c : contractions()) out.push_back(c.onset_s);
        return out;
    }

    /// Three repetitions of 10 s rest followed by 10 s isometric contraction.
    static ContractionProtocol three_contraction() {
        return {{{SegmentState::rest, 10.0}, {SegmentState::contract, 10.0}}, 3};
    }

    /// 200 ms contractions at 1 Hz for 60 s.
    static ContractionProtocol contraction_200ms_1hz() {
        return {{{SegmentState::rest, 0.8}, {SegmentState::contract, 0.2}}, 60};
    }

    bool operator==(const ContractionProtocol&) const = default;
};

/// Trapezoid driven by the contraction intervals shifted by delay_s: 0 before onset+delay,
/// linear rise over ramp_s, linear fall over ramp_s after offset+delay. ramp_s == 0 gives
/// a rectangle. Overlapping tails take the maximum.
inline double trapezoid_level(double t, std::span<const ContractionInterval> intervals, double delay_s,
                              double ramp_s) {
    double level = 0.0;
    for (const auto& c : intervals) {
        const double start = c.onset_s + delay_s;
        if (t < start) break;
        const double end = c.offset_s + delay_s;
        double v;
        if (ramp_s <= 0.0) {
            v = t < end ? 1.0 : 0.0;
        } else if (t < end) {
            v = std::min(1.0, (t - start) / ramp_s);
        } else {
            const double peak = std::min(1.0, (end - start) / ramp_s);
            v = std::max(0.0, peak - (t - end) / ramp_s);
        }
        level = std::max(level, v);
    }
    return level;
}

/// Neural activation level in [0, 1].
inline double activation(double t, std::span<const ContractionInterval> intervals, double ramp_s) {
    return trapezoid_level(t, intervals, 0.0, ramp_s);
}

inline double activation(double t, const ContractionProtocol& protocol, double ramp_s) {
    const auto intervals = protocol.contractions();
    return activation(t, intervals, ramp_s);
}

}  // namespace emgus::synth
