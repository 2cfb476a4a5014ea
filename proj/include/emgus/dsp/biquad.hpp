#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "emgus/core/errors.hpp"

namespace emgus::dsp {

/// Second-order IIR section, a0 normalized to 1:
///   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
struct BiquadSection {
    double b0 = 1.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;

    bool is_finite() const noexcept {
        return std::isfinite(b0) && std::isfinite(b1) && std::isfinite(b2) &&
               std::isfinite(a1) && std::isfinite(a2);
    }

    /// Both poles of z^2 + a1 z + a2 strictly inside the unit circle.
    bool is_stable() const noexcept {
        return is_finite() && std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2;
    }

    /// Complex response at frequency f_hz for sample rate fs_hz.
    std::complex<double> response(double f_hz, double fs_hz) const {
        const double w = 2.0 * std::numbers::pi * f_hz / fs_hz;
        const std::complex<double> z1 = std::polar(1.0, -w);
        const std::complex<double> z2 = z1 * z1;
        return (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2);
    }

    double magnitude(double f_hz, double fs_hz) const { return std::abs(response(f_hz, fs_hz)); }

    bool operator==(const BiquadSection&) const = default;
};

/// Direct-form-II-transposed delay registers for one section.
struct BiquadState {
    double s1 = 0.0;
    double s2 = 0.0;

    void reset() noexcept { s1 = s2 = 0.0; }
    bool operator==(const BiquadState&) const = default;
};

/// One step of the difference equation. Non-finite input throws and leaves state untouched.
inline double process(const BiquadSection& c, BiquadState& st, double x) {
    if (!std::isfinite(x)) {
        throw ParameterError("biquad: non-finite input sample");
    }
    const double y = c.b0 * x + st.s1;
    st.s1 = c.b1 * x - c.a1 * y + st.s2;
    st.s2 = c.b2 * x - c.a2 * y;
    return y;
}

/// Series connection of sections with their own state.
class BiquadCascade {
public:
    BiquadCascade() = default;
    explicit BiquadCascade(std::vector<BiquadSection> sections)
        : sections_(std::move(sections)), states_(sections_.size()) {}

    double process(double x) {
        if (!std::isfinite(x)) {
            throw ParameterError("biquad cascade: non-finite input sample");
        }
        for (std::size_t i = 0; i < sections_.size(); ++i) {
            x = dsp::process(sections_[i], states_[i], x);
        }
        return x;
    }

    void reset() noexcept {
        for (auto& s : states_) s.reset();
    }

    std::complex<double> response(double f_hz, double fs_hz) const {
        std::complex<double> h{1.0, 0.0};
        for (const auto& s : sections_) h *= s.response(f_hz, fs_hz);
        return h;
    }

    std::span<const BiquadSection> sections() const noexcept { return sections_; }
    bool empty() const noexcept { return sections_.empty(); }

private:
    std::vector<BiquadSection> sections_;
    std::vector<BiquadState> states_;
};

}  // namespace emgus::dsp
