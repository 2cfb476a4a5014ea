#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "emgus/core/errors.hpp"
#include "emgus/core/random.hpp"
#include "emgus/core/timed_series.hpp"
#include "emgus/dsp/biquad.hpp"
#include "emgus/dsp/filter_design.hpp"
#include "emgus/synth/protocol.hpp"

namespace emgus::synth {

/// Surrogate sEMG: band-limited Gaussian noise scaled by the activation envelope, plus white
/// baseline noise and a mains tone. Amplitudes are volts at the scale the trigger threshold
/// is applied to. The default burst level puts the plateau waveform length near twice the
/// 264 mV threshold.
struct EmgSynthConfig {
    double fs_hz = 500.0;
    double burst_rms_v = 0.0135;
    double baseline_rms_v = 0.001;
    double mains_amp_v = 0.002;
    double mains_freq_hz = 50.0;
    double onset_ramp_s = 0.0;
    double band_low_hz = 20.0;
    double band_high_hz = 150.0;
    std::uint64_t seed = 1;

    std::vector<std::string> problems(const std::string& prefix = "emg_synth.") const {
        std::vector<std::string> out;
        auto nonneg = [&](double v, const char* name) {
            if (!std::isfinite(v) || v < 0.0) out.push_back(prefix + name + " must be finite and >= 0");
        };
        if (!std::isfinite(fs_hz) || !(fs_hz > 0.0)) out.push_back(prefix + "fs_hz must be > 0");
        nonneg(burst_rms_v, "burst_rms_v");
        nonneg(baseline_rms_v, "baseline_rms_v");
        nonneg(mains_amp_v, "mains_amp_v");
        nonneg(onset_ramp_s, "onset_ramp_s");
        if (!std::isfinite(mains_freq_hz) || !(mains_freq_hz > 0.0)) out.push_back(prefix + "mains_freq_hz must be > 0");
        if (!(band_low_hz > 0.0) || !(band_low_hz < band_high_hz) || !(band_high_hz < fs_hz / 2.0))
            out.push_back(prefix + "band: need 0 < band_low_hz < band_high_hz < fs_hz/2");
        return out;
    }

    bool operator==(const EmgSynthConfig&) const = default;
};

/// Sample-at-a-time generator. Sample i is taken at i / fs_hz.
class EmgGenerator {
public:
    EmgGenerator(const ContractionProtocol& protocol, const EmgSynthConfig& cfg)
        : cfg_(cfg),
          intervals_(protocol.contractions()),
          burst_noise_(derive_seed(cfg.seed, kStreamEmgBurst)),
          baseline_noise_(derive_seed(cfg.seed, kStreamEmgBaseline)) {
        std::vector<std::string> p = cfg.problems();
        for (auto& q : protocol.problems()) p.push_back(std::move(q));
        if (!p.empty()) throw ValidationError(std::move(p));
        shaping_ = dsp::BiquadCascade(dsp::design_bandpass_cascade(2, cfg.band_low_hz, cfg.band_high_hz, cfg.fs_hz));
        unit_gain_ = 1.0 / noise_gain(shaping_);
    }

    double next() {
        const double t = time_of(index_++);
        // The shaping filter runs continuously so bursts start without a filter transient.
        const double burst = shaping_.process(burst_noise_()) * unit_gain_;
        const double white = baseline_noise_();
        double x = 0.0;
        if (cfg_.burst_rms_v > 0.0) x += activation(t, intervals_, cfg_.onset_ramp_s) * cfg_.burst_rms_v * burst;
        if (cfg_.baseline_rms_v > 0.0) x += cfg_.baseline_rms_v * white;
        if (cfg_.mains_amp_v > 0.0) x += cfg_.mains_amp_v * std::sin(2.0 * std::numbers::pi * cfg_.mains_freq_hz * t);
        return x;
    }

    double time_of(std::size_t i) const noexcept { return static_cast<double>(i) / cfg_.fs_hz; }
    std::size_t index() const noexcept { return index_; }
    const std::vector<ContractionInterval>& contractions() const noexcept { return intervals_; }

private:
    // RMS gain of the shaping filter for unit white noise: sqrt of impulse-response energy.
    static double noise_gain(dsp::BiquadCascade filters) {
        filters.reset();
        double energy = 0.0;
        for (int n = 0; n < 20000; ++n) {
            const double h = filters.process(n == 0 ? 1.0 : 0.0);
            energy += h * h;
        }
        return std::sqrt(energy);
    }

    EmgSynthConfig cfg_;
    std::vector<ContractionInterval> intervals_;
    GaussianSource burst_noise_;
    GaussianSource baseline_noise_;
    dsp::BiquadCascade shaping_;
    double unit_gain_ = 1.0;
    std::size_t index_ = 0;
};

struct SynthesizedEmg {
    TimedSeries signal;
    std::vector<ContractionInterval> contractions;
    std::vector<double> onsets_s;
};

/// Whole-record synthesis; duration defaults to the protocol length.
inline SynthesizedEmg synth_emg(const ContractionProtocol& protocol, const EmgSynthConfig& cfg,
                                std::optional<double> duration_s = std::nullopt) {
    EmgGenerator gen(protocol, cfg);
    const double dur = duration_s.value_or(protocol.total_duration_s());
    if (!std::isfinite(dur) || dur < 0.0) throw ParameterError("synth_emg: duration must be >= 0");
    const auto n = static_cast<std::size_t>(std::llround(dur * cfg.fs_hz));
    SynthesizedEmg out;
    out.signal = TimedSeries{cfg.fs_hz, 0.0, "V", {}};
    out.signal.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.signal.values.push_back(gen.next());
    out.contractions = gen.contractions();
    for (const auto& c : out.contractions) out.onsets_s.push_back(c.onset_s);
    return out;
}

}  // namespace emgus::synth
