#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "emgus/core/timed_series.hpp"
#include "emgus/synth/protocol.hpp"

namespace emgus::synth {

/// Mechanical response of the muscle: it lags the electrical onset by em_delay_s, then the
/// tracked boundary moves from depth_rest_mm to depth_contracted_mm over rise_time_s.
struct MuscleMechanics {
    double em_delay_s = 0.05;
    double depth_rest_mm = 22.0;
    double depth_contracted_mm = 30.0;
    double rise_time_s = 0.1;

    std::vector<std::string> problems(const std::string& prefix = "mechanics.") const {
        std::vector<std::string> out;
        if (!std::isfinite(em_delay_s) || em_delay_s < 0.0) out.push_back(prefix + "em_delay_s must be >= 0");
        if (!std::isfinite(depth_rest_mm) || !(depth_rest_mm > 0.0)) out.push_back(prefix + "depth_rest_mm must be > 0");
        if (!std::isfinite(depth_contracted_mm) || !(depth_contracted_mm > depth_rest_mm))
            out.push_back(prefix + "depth_contracted_mm must be > depth_rest_mm");
        if (!std::isfinite(rise_time_s) || rise_time_s < 0.0) out.push_back(prefix + "rise_time_s must be >= 0");
        return out;
    }

    /// Within the 30-100 ms electromechanical delay range reported for skeletal muscle.
    bool physiological_delay() const noexcept { return em_delay_s >= 0.03 && em_delay_s <= 0.1; }

    bool operator==(const MuscleMechanics&) const = default;
};

inline double mechanical_level(double t, std::span<const ContractionInterval> intervals, const MuscleMechanics& m) {
    return trapezoid_level(t, intervals, m.em_delay_s, m.rise_time_s);
}

/// Depth in mm of the tracked fascicle boundary.
inline double fascicle_depth(double t, std::span<const ContractionInterval> intervals, const MuscleMechanics& m) {
    const double level = mechanical_level(t, intervals, m);
    if (level == 0.0) return m.depth_rest_mm;
    if (level == 1.0) return m.depth_contracted_mm;
    return m.depth_rest_mm + level * (m.depth_contracted_mm - m.depth_rest_mm);
}

inline double fascicle_depth(double t, const ContractionProtocol& protocol, const MuscleMechanics& m) {
    const auto intervals = protocol.contractions();
    return fascicle_depth(t, intervals, m);
}

/// Force normalized to [0, 1] by its maximum; same delayed shape as the depth.
inline double synth_force(double t, std::span<const ContractionInterval> intervals, const MuscleMechanics& m) {
    return mechanical_level(t, intervals, m);
}

inline double synth_force(double t, const ContractionProtocol& protocol, const MuscleMechanics& m) {
    const auto intervals = protocol.contractions();
    return synth_force(t, intervals, m);
}

inline TimedSeries synth_force_series(std::span<const ContractionInterval> intervals, const MuscleMechanics& m,
                                      double fs_hz, std::size_t samples) {
    TimedSeries out{fs_hz, 0.0, "normalized", {}};
    out.values.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) out.values.push_back(synth_force(out.time_at(i), intervals, m));
    return out;
}

}  // namespace emgus::synth
