#pragma once

// Reference computations used by the tests. Each is derived independently of the library:
// analog prototypes evaluated on the prewarped axis, brute-force sums, closed forms.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

inline double warp(double f, double fs) { return std::tan(std::numbers::pi * f / fs); }

/// Butterworth band-pass of prototype order n, evaluated on the analog axis that the
/// bilinear transform maps onto f. Peak gain 1.
inline double bandpass_mag(double f, double f_lo, double f_hi, double fs, int n = 1) {
    const double w = warp(f, fs);
    const double w1 = warp(f_lo, fs);
    const double w2 = warp(f_hi, fs);
    if (w == 0.0) return 0.0;
    const double x = (w * w - w1 * w2) / ((w2 - w1) * w);
    return 1.0 / std::sqrt(1.0 + std::pow(x * x, n));
}

/// Second-order notch (s^2 + 1) / (s^2 + s/q + 1) on the prewarped axis.
inline double notch_mag(double f, double f0, double q, double fs) {
    const double w = warp(f, fs) / warp(f0, fs);
    const double num = 1.0 - w * w;
    return std::abs(num) / std::hypot(num, w / q);
}

struct Coeffs {
    double b0, b1, b2, a1, a2;
};

/// Steady-state gain measured by driving the difference equation with a sinusoid and
/// fitting the output against sin and cos over whole periods after the transient.
inline double measured_gain(const Coeffs& c, double f, double fs, std::size_t settle, std::size_t periods) {
    const double w = 2.0 * std::numbers::pi * f / fs;
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    const auto per = static_cast<std::size_t>(std::llround(fs / f));
    const std::size_t n_fit = per * periods;
    long double ss = 0, sc = 0, s_norm = 0, c_norm = 0;
    for (std::size_t n = 0; n < settle + n_fit; ++n) {
        const double x = std::sin(w * static_cast<double>(n));
        const double y = c.b0 * x + c.b1 * x1 + c.b2 * x2 - c.a1 * y1 - c.a2 * y2;
        x2 = x1;
        x1 = x;
        y2 = y1;
        y1 = y;
        if (n >= settle) {
            const double s = std::sin(w * static_cast<double>(n));
            const double co = std::cos(w * static_cast<double>(n));
            ss += y * s;
            sc += y * co;
            s_norm += s * s;
            c_norm += co * co;
        }
    }
    const double a = static_cast<double>(ss / s_norm);
    const double b = static_cast<double>(sc / c_norm);
    return std::hypot(a, b);
}

/// Waveform length at sample n, summing |x[k] - x[k-1]| over the window - 1 differences
/// that end at n; samples before the start repeat x[0].
inline double waveform_length(std::span<const double> x, std::size_t n, std::size_t window) {
    auto at = [&](long long k) { return k < 0 ? x[0] : x[static_cast<std::size_t>(k)]; };
    long double s = 0;
    const auto end = static_cast<long long>(n);
    for (long long k = end - static_cast<long long>(window) + 2; k <= end; ++k) s += std::abs(static_cast<long double>(at(k)) - at(k - 1));
    return static_cast<double>(s);
}

/// Echo sample index for a reflector at depth_mm.
inline long long echo_sample(double depth_mm, double c_m_s, double fs_hz) {
    return std::llround(2.0 * depth_mm / 1000.0 / c_m_s * fs_hz);
}

}  // namespace oracle
