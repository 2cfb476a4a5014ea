#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "emgus/core/errors.hpp"
#include "emgus/core/random.hpp"
#include "emgus/core/timed_series.hpp"
#include "emgus/cosim/scenario.hpp"
#include "emgus/cosim/us_subsystem.hpp"
#include "emgus/dsp/pipeline.hpp"
#include "emgus/synth/emg.hpp"
#include "emgus/synth/mechanics.hpp"
#include "emgus/synth/ultrasound.hpp"

namespace emgus::cosim {

struct UsFrame {
    double t_s = 0.0;  // pulse transmission time
    double true_depth_mm = 0.0;
    std::vector<float> scanline;

    bool operator==(const UsFrame&) const = default;
};

struct UsFrameSet {
    synth::UsSynthConfig config;
    std::vector<UsFrame> frames;

    std::size_t size() const noexcept { return frames.size(); }
    bool empty() const noexcept { return frames.empty(); }
    bool operator==(const UsFrameSet&) const = default;
};

struct GroundTruth {
    std::vector<synth::ContractionInterval> contractions;
    std::vector<double> onsets_s;
    double em_delay_s = 0.0;
};

struct SimulationResult {
    TimedSeries raw;
    TimedSeries filtered;
    TimedSeries envelope;
    TimedSeries force;
    dsp::TriggerTrace trace;
    UsFrameSet frames;
    GroundTruth truth;
    double duration_s = 0.0;
    UsTiming us_timing;
};

/// Checks that every frame lies inside [rising + wake_latency, falling] of some trigger
/// assertion and that the trace is well formed. Returns human-readable violations.
inline std::vector<std::string> frame_invariant_violations(const SimulationResult& r) {
    std::vector<std::string> out;
    if (!r.trace.well_formed()) out.push_back("trigger trace edges do not alternate or do not increase");
    if (r.us_timing.force_continuous) return out;
    constexpr double tol = 1e-9;
    const auto intervals = r.trace.asserted_intervals(r.duration_s);
    std::size_t k = 0;
    for (const auto& f : r.frames.frames) {
        while (k < intervals.size() && intervals[k].end_s + tol < f.t_s) ++k;
        const bool inside = k < intervals.size() && f.t_s + tol >= intervals[k].begin_s + r.us_timing.wake_latency_s &&
                            f.t_s <= intervals[k].end_s + tol;
        if (!inside) out.push_back("frame at t=" + std::to_string(f.t_s) + " s lies outside every asserted interval");
    }
    return out;
}

/// Single-pass co-simulation at EMG sample resolution. Per EMG sample: synthesize, run the
/// trigger pipeline, drive the trigger line. The US probe runs on its own event times
/// (wake completion, frame ticks) and synthesizes each scanline from the fascicle depth at
/// the frame time. Deterministic for a given scenario.
inline SimulationResult simulate(const Scenario& scenario) {
    scenario.validate();
    const double fs = scenario.emg.fs_hz;
    const double duration = scenario.duration_s();
    const auto n_samples = static_cast<std::size_t>(std::llround(duration * fs));

    synth::EmgGenerator gen(scenario.protocol, scenario.emg_config());
    dsp::TriggerPipeline pipe(scenario.pipeline);
    UsSubsystem us(scenario.us_timing);

    SimulationResult r;
    r.duration_s = duration;
    r.us_timing = scenario.us_timing;
    r.truth.contractions = gen.contractions();
    for (const auto& c : r.truth.contractions) r.truth.onsets_s.push_back(c.onset_s);
    r.truth.em_delay_s = scenario.mechanics.em_delay_s;
    r.raw = TimedSeries{fs, 0.0, "V", {}};
    r.filtered = TimedSeries{fs, 0.0, "V", {}};
    r.envelope = TimedSeries{fs, 0.0, "V", {}};
    r.raw.values.reserve(n_samples);
    r.filtered.values.reserve(n_samples);
    r.envelope.values.reserve(n_samples);
    r.frames.config = scenario.us;

    std::uint64_t frame_index = 0;
    auto acquire = [&](SimTime t) {
        const double t_s = to_seconds(t);
        const double depth = synth::fascicle_depth(t_s, r.truth.contractions, scenario.mechanics);
        const auto seed = derive_seed(scenario.run.seed, kStreamUsFrame + frame_index++);
        r.frames.frames.push_back({t_s, depth, synth::synth_scanline(depth, scenario.us, seed)});
    };

    for (std::size_t n = 0; n < n_samples; ++n) {
        const SimTime t_ns{std::llround(static_cast<double>(n) * 1e9 / fs)};
        us.advance_until(t_ns, acquire);
        const double x = gen.next();
        const auto step = pipe.push(x, r.raw.time_at(n));
        r.raw.values.push_back(x);
        r.filtered.values.push_back(step.filtered);
        r.envelope.values.push_back(step.envelope);
        if (step.edge) {
            r.trace.edges.push_back(*step.edge);
            us.on_trigger(step.edge->kind == dsp::EdgeKind::rising, t_ns);
        }
    }
    us.advance_until(to_sim_time(duration), acquire);

    r.force = synth::synth_force_series(r.truth.contractions, scenario.mechanics, fs, n_samples);

    if (auto v = frame_invariant_violations(r); !v.empty()) {
        throw InvariantError("simulation invariant violated: " + v.front());
    }
    return r;
}

}  // namespace emgus::cosim
