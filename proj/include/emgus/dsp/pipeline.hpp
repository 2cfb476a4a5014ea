#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "emgus/core/errors.hpp"
#include "emgus/core/timed_series.hpp"
#include "emgus/dsp/adc.hpp"
#include "emgus/dsp/biquad.hpp"
#include "emgus/dsp/envelope.hpp"
#include "emgus/dsp/filter_design.hpp"
#include "emgus/dsp/trigger.hpp"

namespace emgus::dsp {

struct BandpassConfig {
    bool enabled = true;
    double low_hz = 20.0;
    double high_hz = 130.0;
    int order = 1;  // prototype order; 1 = a single biquad

    bool operator==(const BandpassConfig&) const = default;
};

struct NotchConfig {
    bool enabled = true;
    double freq_hz = 50.0;
    double q = 30.0;

    bool operator==(const NotchConfig&) const = default;
};

/// Parameters of the on-probe trigger chain: band-pass -> notch -> waveform length -> comparator.
struct PipelineConfig {
    double sample_rate_hz = 500.0;
    BandpassConfig bandpass;
    NotchConfig notch;
    std::size_t envelope_window = WaveformLength::kDefaultWindow;
    ComparatorConfig comparator;
    /// Filters run but the envelope is held at 0 and the comparator is idle for this long
    /// after the first sample, so start-up filter transients cannot fire the trigger.
    double settle_s = 0.75;
    AdcConfig adc;

    std::vector<std::string> problems(const std::string& prefix = "pipeline.") const {
        std::vector<std::string> out;
        const double fs = sample_rate_hz;
        if (!std::isfinite(fs) || !(fs > 0.0)) out.push_back(prefix + "sample_rate_hz must be > 0");
        if (bandpass.enabled) {
            if (!(bandpass.low_hz > 0.0) || !(bandpass.low_hz < bandpass.high_hz) ||
                !(bandpass.high_hz < fs / 2.0))
                out.push_back(prefix + "bandpass: need 0 < low_hz < high_hz < sample_rate_hz/2");
            if (bandpass.order < 1 || bandpass.order > 16) out.push_back(prefix + "bandpass.order must be in [1, 16]");
        }
        if (notch.enabled) {
            if (!(notch.freq_hz > 0.0) || !(notch.freq_hz < fs / 2.0))
                out.push_back(prefix + "notch.freq_hz must be in (0, sample_rate_hz/2)");
            if (!std::isfinite(notch.q) || !(notch.q > 0.0)) out.push_back(prefix + "notch.q must be > 0");
        }
        if (envelope_window < 2) out.push_back(prefix + "envelope.window must be >= 2");
        for (auto& p : comparator.problems(prefix + "threshold.")) out.push_back(std::move(p));
        if (!std::isfinite(settle_s) || settle_s < 0.0) out.push_back(prefix + "settle_s must be >= 0");
        for (auto& p : adc.problems(prefix + "adc.")) out.push_back(std::move(p));
        return out;
    }

    void validate() const {
        if (auto p = problems(); !p.empty()) throw ValidationError(std::move(p));
    }

    std::size_t settle_samples() const noexcept {
        return static_cast<std::size_t>(std::llround(settle_s * sample_rate_hz));
    }

    BiquadCascade make_filters() const {
        std::vector<BiquadSection> sections;
        if (bandpass.enabled) {
            for (const auto& s : design_bandpass_cascade(bandpass.order, bandpass.low_hz, bandpass.high_hz, sample_rate_hz))
                sections.push_back(s);
        }
        if (notch.enabled) sections.push_back(design_notch(notch.freq_hz, notch.q, sample_rate_hz));
        return BiquadCascade(std::move(sections));
    }

    bool operator==(const PipelineConfig&) const = default;
};

/// Streaming form of the trigger chain; one call per acquired sample.
class TriggerPipeline {
public:
    struct Step {
        double filtered = 0.0;
        double envelope = 0.0;
        bool asserted = false;
        std::optional<TriggerEdge> edge;
    };

    explicit TriggerPipeline(const PipelineConfig& cfg)
        : settle_samples_((cfg.validate(), cfg.settle_samples())),
          filters_(cfg.make_filters()),
          envelope_(cfg.envelope_window),
          comparator_(cfg.comparator) {}

    Step push(double x, double t_s) {
        Step out;
        out.filtered = filters_.process(x);
        if (count_++ < settle_samples_) return out;
        out.envelope = envelope_.push(out.filtered);
        const auto u = comparator_.update(out.envelope, t_s);
        out.asserted = u.asserted;
        out.edge = u.edge;
        return out;
    }

    std::size_t samples_seen() const noexcept { return count_; }
    bool asserted() const noexcept { return comparator_.asserted(); }

private:
    std::size_t settle_samples_;
    BiquadCascade filters_;
    WaveformLength envelope_;
    TriggerComparator comparator_;
    std::size_t count_ = 0;
};

struct PipelineOutput {
    TimedSeries filtered;
    TimedSeries envelope;
    TriggerTrace trace;
};

/// Runs the trigger chain over a recorded series. All outputs share the input timeline.
inline PipelineOutput run_pipeline(const TimedSeries& raw, const PipelineConfig& cfg) {
    if (raw.sample_rate_hz != cfg.sample_rate_hz) {
        throw ParameterError("run_pipeline: series sample rate " + std::to_string(raw.sample_rate_hz) +
                             " Hz does not match pipeline rate " + std::to_string(cfg.sample_rate_hz) + " Hz");
    }
    TriggerPipeline pipe(cfg);
    PipelineOutput out;
    out.filtered = TimedSeries{raw.sample_rate_hz, raw.start_s, raw.unit, {}};
    out.envelope = TimedSeries{raw.sample_rate_hz, raw.start_s, raw.unit, {}};
    out.filtered.values.reserve(raw.size());
    out.envelope.values.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto step = pipe.push(raw.values[i], raw.time_at(i));
        out.filtered.values.push_back(step.filtered);
        out.envelope.values.push_back(step.envelope);
        if (step.edge) out.trace.edges.push_back(*step.edge);
    }
    return out;
}

}  // namespace emgus::dsp
