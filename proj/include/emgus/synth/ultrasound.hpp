#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "emgus/core/errors.hpp"
#include "emgus/core/random.hpp"

namespace emgus::synth {

/// Static echo source (skin, superficial fascia) present in every scanline.
struct Scatterer {
    double depth_mm = 0.0;
    double amplitude = 0.0;

    bool operator==(const Scatterer&) const = default;
};

/// Single-channel A-mode acquisition model. Values are in normalized receive units.
struct UsSynthConfig {
    double f_center_hz = 2.25e6;
    double fs_hz = 8e6;
    std::size_t samples_per_scanline = 400;
    double speed_of_sound_m_s = 1540.0;
    /// -6 dB spectral width of the pulse as a fraction of f_center.
    double pulse_bandwidth_fraction = 0.6;
    double noise_rms = 0.02;
    double attenuation_db_per_cm_mhz = 0.5;
    double reflector_amplitude = 1.0;
    std::vector<Scatterer> scatterers{{1.5, 0.25}, {8.0, 0.15}};

    std::vector<std::string> problems(const std::string& prefix = "us.") const {
        std::vector<std::string> out;
        if (!std::isfinite(fs_hz) || !(fs_hz > 0.0)) out.push_back(prefix + "fs_hz must be > 0");
        if (!std::isfinite(f_center_hz) || !(f_center_hz > 0.0) || !(f_center_hz < fs_hz / 2.0))
            out.push_back(prefix + "f_center_hz must be in (0, fs_hz/2)");
        if (samples_per_scanline < 1) out.push_back(prefix + "samples_per_scanline must be >= 1");
        if (!std::isfinite(speed_of_sound_m_s) || !(speed_of_sound_m_s > 0.0))
            out.push_back(prefix + "speed_of_sound_m_s must be > 0");
        if (!std::isfinite(pulse_bandwidth_fraction) || !(pulse_bandwidth_fraction > 0.0))
            out.push_back(prefix + "pulse_bandwidth_fraction must be > 0");
        if (!std::isfinite(noise_rms) || noise_rms < 0.0) out.push_back(prefix + "noise_rms must be >= 0");
        if (!std::isfinite(attenuation_db_per_cm_mhz) || attenuation_db_per_cm_mhz < 0.0)
            out.push_back(prefix + "attenuation_db_per_cm_mhz must be >= 0");
        if (!std::isfinite(reflector_amplitude) || reflector_amplitude < 0.0)
            out.push_back(prefix + "reflector_amplitude must be >= 0");
        const bool geometry_ok = out.empty();
        for (std::size_t i = 0; i < scatterers.size(); ++i) {
            const auto& s = scatterers[i];
            const std::string name = prefix + "scatterers[" + std::to_string(i) + "]";
            if (!std::isfinite(s.depth_mm) || s.depth_mm < 0.0 || !std::isfinite(s.amplitude))
                out.push_back(name + " must have finite depth_mm >= 0 and finite amplitude");
            else if (geometry_ok && echo_sample(s.depth_mm) >= static_cast<long long>(samples_per_scanline))
                out.push_back(name + " lies beyond the end of the scanline");
        }
        return out;
    }

    /// Round-trip sample index of a reflector at depth_mm.
    long long echo_sample(double depth_mm) const {
        return std::llround(2.0 * depth_mm / 1000.0 / speed_of_sound_m_s * fs_hz);
    }

    /// Depth in mm represented by sample i.
    double sample_depth_mm(double i) const noexcept { return i * speed_of_sound_m_s / (2.0 * fs_hz) * 1000.0; }

    double max_depth_mm() const noexcept { return sample_depth_mm(static_cast<double>(samples_per_scanline - 1)); }

    /// Round-trip amplitude factor, linear in dB with depth and frequency.
    double attenuation(double depth_mm) const noexcept {
        const double db = attenuation_db_per_cm_mhz * (f_center_hz / 1e6) * (2.0 * depth_mm / 10.0);
        return std::pow(10.0, -db / 20.0);
    }

    /// Time-domain standard deviation of the Gaussian pulse envelope, in samples.
    double pulse_sigma_samples() const noexcept {
        const double bw_hz = pulse_bandwidth_fraction * f_center_hz;
        return std::sqrt(2.0 * std::numbers::ln2) / (std::numbers::pi * bw_hz) * fs_hz;
    }

    bool operator==(const UsSynthConfig&) const = default;
};

namespace detail {

inline void add_echo(std::vector<double>& line, const UsSynthConfig& cfg, long long center, double amplitude) {
    const double sigma = cfg.pulse_sigma_samples();
    const double w = 2.0 * std::numbers::pi * cfg.f_center_hz / cfg.fs_hz;
    const auto reach = static_cast<long long>(std::ceil(6.0 * sigma)) + 1;
    const long long lo = std::max<long long>(0, center - reach);
    const long long hi = std::min<long long>(static_cast<long long>(line.size()) - 1, center + reach);
    for (long long n = lo; n <= hi; ++n) {
        const double k = static_cast<double>(n - center);
        line[static_cast<std::size_t>(n)] += amplitude * std::exp(-k * k / (2.0 * sigma * sigma)) * std::cos(w * k);
    }
}

}  // namespace detail

/// One A-mode scanline: Gaussian-modulated tone bursts at the reflector and static
/// scatterers (each attenuated by its round trip), plus white noise. depth_mm == nullopt
/// omits the moving reflector.
inline std::vector<float> synth_scanline(std::optional<double> depth_mm, const UsSynthConfig& cfg,
                                         std::uint64_t seed) {
    if (auto p = cfg.problems(); !p.empty()) throw ValidationError(std::move(p));
    std::vector<double> line(cfg.samples_per_scanline, 0.0);
    if (depth_mm) {
        if (!std::isfinite(*depth_mm) || *depth_mm < 0.0) throw ParameterError("synth_scanline: depth must be >= 0");
        const long long center = cfg.echo_sample(*depth_mm);
        if (center >= static_cast<long long>(cfg.samples_per_scanline)) {
            throw ParameterError("synth_scanline: echo at " + std::to_string(*depth_mm) +
                                 " mm falls beyond the end of the scanline (" + std::to_string(cfg.max_depth_mm()) +
                                 " mm)");
        }
        if (cfg.reflector_amplitude > 0.0)
            detail::add_echo(line, cfg, center, cfg.reflector_amplitude * cfg.attenuation(*depth_mm));
    }
    for (const auto& s : cfg.scatterers) {
        if (s.amplitude != 0.0) detail::add_echo(line, cfg, cfg.echo_sample(s.depth_mm), s.amplitude * cfg.attenuation(s.depth_mm));
    }
    std::vector<float> out(line.size());
    if (cfg.noise_rms > 0.0) {
        GaussianSource noise(seed);
        for (std::size_t i = 0; i < line.size(); ++i) out[i] = static_cast<float>(line[i] + cfg.noise_rms * noise());
    } else {
        for (std::size_t i = 0; i < line.size(); ++i) out[i] = static_cast<float>(line[i]);
    }
    return out;
}

}  // namespace emgus::synth
