#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emgus/core/errors.hpp"
#include "emgus/dsp/pipeline.hpp"
#include "emgus/energy/power.hpp"
#include "emgus/synth/emg.hpp"
#include "emgus/synth/mechanics.hpp"
#include "emgus/synth/protocol.hpp"
#include "emgus/synth/ultrasound.hpp"

namespace emgus::cosim {

/// Sleep/wake timing of the ultrasound probe.
struct UsTiming {
    double wake_latency_s = 0.001;
    double frame_period_s = 0.02;  // 50 Hz A-mode
    /// Acquire continuously regardless of the trigger line (reference M-mode only).
    bool force_continuous = false;

    bool operator==(const UsTiming&) const = default;
};

struct RunConfig {
    std::optional<double> duration_s;  // nullopt: protocol length
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

/// Complete co-simulation input.
struct Scenario {
    synth::ContractionProtocol protocol = synth::ContractionProtocol::three_contraction();
    synth::EmgSynthConfig emg;
    synth::MuscleMechanics mechanics;
    synth::UsSynthConfig us;
    UsTiming us_timing;
    dsp::PipelineConfig pipeline;
    energy::PowerModel power;
    RunConfig run;

    double duration_s() const { return run.duration_s.value_or(protocol.total_duration_s()); }

    /// EMG generator settings with the stream seed derived from run.seed.
    synth::EmgSynthConfig emg_config() const {
        synth::EmgSynthConfig c = emg;
        c.seed = run.seed;
        return c;
    }

    std::vector<std::string> problems() const {
        std::vector<std::string> out;
        auto take = [&](std::vector<std::string> p) {
            for (auto& s : p) out.push_back(std::move(s));
        };
        take(protocol.problems());
        take(emg.problems());
        take(mechanics.problems());
        take(us.problems());
        take(pipeline.problems());
        take(power.problems());
        if (!std::isfinite(us_timing.wake_latency_s) || us_timing.wake_latency_s < 0.0)
            out.push_back("us.wake_latency_s must be >= 0");
        if (!std::isfinite(us_timing.frame_period_s) || !(us_timing.frame_period_s > 0.0))
            out.push_back("us.frame_period_s must be > 0");
        if (run.duration_s && (!std::isfinite(*run.duration_s) || !(*run.duration_s > 0.0)))
            out.push_back("run.duration_s must be > 0");
        if (emg.fs_hz != pipeline.sample_rate_hz)
            out.push_back("pipeline.sample_rate_hz must equal emg_synth.fs_hz");
        if (out.empty() &&
            us.echo_sample(mechanics.depth_contracted_mm) >= static_cast<long long>(us.samples_per_scanline))
            out.push_back("us.samples_per_scanline does not cover the round trip to mechanics.depth_contracted_mm");
        if (out.empty() && !(duration_s() > 0.0)) out.push_back("run.duration_s must be > 0");
        return out;
    }

    void validate() const {
        if (auto p = problems(); !p.empty()) throw ValidationError(std::move(p));
    }

    bool operator==(const Scenario&) const = default;
};

inline constexpr std::string_view kPresetThreeContraction = "three-contraction";
inline constexpr std::string_view kPreset200ms1Hz = "periodic-200ms-1hz";

inline std::vector<std::string> preset_names() {
    return {std::string(kPresetThreeContraction), std::string(kPreset200ms1Hz)};
}

/// Built-in scenarios; nullopt for unknown names.
inline std::optional<Scenario> preset(std::string_view name) {
    Scenario s;
    if (name == kPresetThreeContraction) {
        s.protocol = synth::ContractionProtocol::three_contraction();
        s.run.output_dir = "out/three-contraction";
        return s;
    }
    if (name == kPreset200ms1Hz) {
        s.protocol = synth::ContractionProtocol::contraction_200ms_1hz();
        s.run.output_dir = "out/periodic-200ms-1hz";
        return s;
    }
    return std::nullopt;
}

}  // namespace emgus::cosim
