#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "emgus/cosim/simulate.hpp"
#include "emgus/dsp/trigger.hpp"

namespace emgus::cosim {

/// Rising edges further than this after the nearest preceding onset are spurious.
inline constexpr double kMatchWindowS = 1.0;

struct ContractionLatency {
    double onset_s = 0.0;
    std::optional<double> rising_s;
    std::optional<double> latency_s;  // rising - onset
    std::optional<double> margin_s;   // em_delay - latency
};

struct LatencyReport {
    std::vector<ContractionLatency> contractions;
    std::size_t matched = 0;
    std::size_t missed = 0;
    /// Rising edges with no onset in the preceding kMatchWindowS.
    std::size_t spurious = 0;
    /// Extra rising edges attributed to an onset that already had one.
    std::size_t retriggers = 0;
    std::optional<double> min_s;
    std::optional<double> mean_s;
    std::optional<double> max_s;
    double em_delay_s = 0.0;

    /// em_delay minus the worst latency; positive when every trigger beats the muscle.
    std::optional<double> worst_margin_s() const {
        if (!max_s) return std::nullopt;
        return em_delay_s - *max_s;
    }
};

/// Matches every rising edge to the nearest preceding ground-truth onset (within
/// kMatchWindowS) and reports per-contraction trigger latency.
inline LatencyReport measure_latency(const dsp::TriggerTrace& trace, std::span<const double> onsets_s,
                                     double em_delay_s) {
    LatencyReport rep;
    rep.em_delay_s = em_delay_s;
    rep.contractions.reserve(onsets_s.size());
    for (double o : onsets_s) rep.contractions.push_back({o, {}, {}, {}});

    for (double t : trace.rising_times()) {
        const auto it = std::upper_bound(onsets_s.begin(), onsets_s.end(), t);
        if (it == onsets_s.begin()) {
            ++rep.spurious;
            continue;
        }
        const auto k = static_cast<std::size_t>(std::distance(onsets_s.begin(), it) - 1);
        if (t - onsets_s[k] > kMatchWindowS) {
            ++rep.spurious;
            continue;
        }
        auto& c = rep.contractions[k];
        if (c.rising_s) {
            ++rep.retriggers;
            continue;
        }
        c.rising_s = t;
        c.latency_s = t - c.onset_s;
        c.margin_s = em_delay_s - *c.latency_s;
    }

    double sum = 0.0;
    for (const auto& c : rep.contractions) {
        if (!c.latency_s) {
            ++rep.missed;
            continue;
        }
        ++rep.matched;
        const double l = *c.latency_s;
        sum += l;
        rep.min_s = rep.min_s ? std::min(*rep.min_s, l) : l;
        rep.max_s = rep.max_s ? std::max(*rep.max_s, l) : l;
    }
    if (rep.matched > 0) rep.mean_s = sum / static_cast<double>(rep.matched);
    return rep;
}

inline LatencyReport measure_latency(const SimulationResult& r) {
    return measure_latency(r.trace, r.truth.onsets_s, r.truth.em_delay_s);
}

/// Per contraction: true iff the first frame at or after the onset (and before the next
/// onset) was acquired no later than onset + em_delay, i.e. before the fascicles move.
inline std::vector<bool> first_frame_before_motion(std::span<const double> frame_times_s,
                                                   std::span<const double> onsets_s, double em_delay_s) {
    std::vector<bool> out;
    out.reserve(onsets_s.size());
    for (std::size_t k = 0; k < onsets_s.size(); ++k) {
        const double onset = onsets_s[k];
        const auto it = std::lower_bound(frame_times_s.begin(), frame_times_s.end(), onset);
        const bool has_frame = it != frame_times_s.end() && (k + 1 == onsets_s.size() || *it < onsets_s[k + 1]);
        out.push_back(has_frame && *it <= onset + em_delay_s);
    }
    return out;
}

inline std::vector<bool> first_frame_before_motion(const SimulationResult& r) {
    std::vector<double> times;
    times.reserve(r.frames.size());
    for (const auto& f : r.frames.frames) times.push_back(f.t_s);
    return first_frame_before_motion(times, r.truth.onsets_s, r.truth.em_delay_s);
}

/// Number of frames acquired inside each asserted interval of the trace.
inline std::vector<std::size_t> frames_per_activation(const SimulationResult& r) {
    const auto intervals = r.trace.asserted_intervals(r.duration_s);
    std::vector<std::size_t> counts(intervals.size(), 0);
    std::size_t k = 0;
    for (const auto& f : r.frames.frames) {
        while (k < intervals.size() && intervals[k].end_s < f.t_s) ++k;
        if (k < intervals.size() && f.t_s >= intervals[k].begin_s) ++counts[k];
    }
    return counts;
}

}  // namespace emgus::cosim
