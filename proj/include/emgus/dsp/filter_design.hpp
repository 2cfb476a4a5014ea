#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "emgus/core/errors.hpp"
#include "emgus/dsp/biquad.hpp"

namespace emgus::dsp {

namespace detail {

inline void require_band(const char* who, double f_low, double f_high, double fs) {
    auto fail = [&](const std::string& what) {
        std::ostringstream os;
        os << who << ": " << what << " (f_low=" << f_low << ", f_high=" << f_high
           << ", fs=" << fs << ")";
        throw ParameterError(os.str());
    };
    if (!std::isfinite(f_low) || !std::isfinite(f_high) || !std::isfinite(fs)) fail("non-finite argument");
    if (!(fs > 0.0)) fail("fs must be > 0");
    if (!(f_low > 0.0)) fail("f_low must be > 0");
    if (!(f_low < f_high)) fail("f_low must be < f_high");
    if (!(f_high < fs / 2.0)) fail("f_high must be < fs/2");
}

// Bilinear transform with prewarping: analog frequencies are tan(pi f / fs) so that
// s = (1 - z^-1) / (1 + z^-1) maps them onto f exactly.
inline double prewarp(double f, double fs) { return std::tan(std::numbers::pi * f / fs); }

inline BiquadSection section_from_analog_pole(std::complex<double> s, double center_w) {
    // Digital pole of the pair {s, conj(s)} plus zeros at z = +1 and z = -1.
    const std::complex<double> z = (1.0 + s) / (1.0 - s);
    BiquadSection c;
    c.a1 = -2.0 * z.real();
    c.a2 = std::norm(z);
    c.b0 = 1.0;
    c.b1 = 0.0;
    c.b2 = -1.0;
    const double g = 1.0 / c.magnitude(center_w, 2.0 * std::numbers::pi);
    c.b0 = g;
    c.b2 = -g;
    return c;
}

}  // namespace detail

/// Second-order Butterworth band-pass (first-order low-pass prototype), bilinear
/// transform with prewarped corners. |H| = 1/sqrt(2) of peak exactly at f_low and f_high,
/// exact zeros at DC and Nyquist.
inline BiquadSection design_bandpass(double f_low, double f_high, double fs) {
    detail::require_band("design_bandpass", f_low, f_high, fs);
    const double w1 = detail::prewarp(f_low, fs);
    const double w2 = detail::prewarp(f_high, fs);
    const double bw = w2 - w1;
    const double w0sq = w1 * w2;
    const double a0 = 1.0 + bw + w0sq;
    BiquadSection c;
    c.b0 = bw / a0;
    c.b1 = 0.0;
    c.b2 = -c.b0;
    c.a1 = 2.0 * (w0sq - 1.0) / a0;
    c.a2 = (1.0 - bw + w0sq) / a0;
    return c;
}

/// Butterworth band-pass of prototype order `order`, as `order` biquad sections.
/// order == 1 returns exactly design_bandpass.
inline std::vector<BiquadSection> design_bandpass_cascade(int order, double f_low, double f_high,
                                                          double fs) {
    detail::require_band("design_bandpass_cascade", f_low, f_high, fs);
    if (order < 1 || order > 16) {
        throw ParameterError("design_bandpass_cascade: order must be in [1, 16]");
    }
    std::vector<BiquadSection> out;
    if (order % 2 == 1) out.push_back(design_bandpass(f_low, f_high, fs));

    const double w1 = detail::prewarp(f_low, fs);
    const double w2 = detail::prewarp(f_high, fs);
    const double bw = w2 - w1;
    const double w0sq = w1 * w2;
    // Center in normalized digital radians (fs mapped to 2 pi).
    const double center = 2.0 * std::atan(std::sqrt(w0sq));
    for (int k = 1; k <= order / 2; ++k) {
        const double theta = std::numbers::pi * (2.0 * k - 1.0) / (2.0 * order);
        const std::complex<double> p{-std::sin(theta), std::cos(theta)};
        // Low-pass to band-pass: each prototype pole p gives the roots of s^2 - p B s + W0^2.
        const std::complex<double> pb = p * bw;
        const std::complex<double> disc = std::sqrt(pb * pb - 4.0 * w0sq);
        out.push_back(detail::section_from_analog_pole((pb + disc) / 2.0, center));
        out.push_back(detail::section_from_analog_pole((pb - disc) / 2.0, center));
    }
    return out;
}

/// Second-order notch: unity gain at DC and Nyquist, null at f0, -3 dB width f0/q.
inline BiquadSection design_notch(double f0, double q, double fs) {
    if (!std::isfinite(f0) || !std::isfinite(q) || !std::isfinite(fs) || !(fs > 0.0)) {
        throw ParameterError("design_notch: non-finite or non-positive argument");
    }
    if (!(f0 > 0.0) || !(f0 < fs / 2.0)) {
        std::ostringstream os;
        os << "design_notch: f0 must be in (0, fs/2) (f0=" << f0 << ", fs=" << fs << ")";
        throw ParameterError(os.str());
    }
    if (!(q > 0.0)) {
        throw ParameterError("design_notch: q must be > 0");
    }
    const double w0 = 2.0 * std::numbers::pi * f0 / fs;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double cosw = std::cos(w0);
    const double a0 = 1.0 + alpha;
    BiquadSection c;
    c.b0 = 1.0 / a0;
    c.b1 = -2.0 * cosw / a0;
    c.b2 = 1.0 / a0;
    c.a1 = -2.0 * cosw / a0;
    c.a2 = (1.0 - alpha) / a0;
    return c;
}

}  // namespace emgus::dsp
