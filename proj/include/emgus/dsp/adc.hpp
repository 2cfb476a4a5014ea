#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "emgus/core/errors.hpp"

namespace emgus::dsp {

/// Signed ADC code to volts: code * vref / (gain * (2^(bits-1) - 1)).
/// Defaults follow a 24-bit biopotential AFE at PGA gain 6 with a 2.4 V reference.
struct AdcConfig {
    double vref_v = 2.4;
    double pga_gain = 6.0;
    int resolution_bits = 24;

    std::vector<std::string> problems(const std::string& prefix = "") const {
        std::vector<std::string> out;
        if (!std::isfinite(vref_v) || !(vref_v > 0.0)) out.push_back(prefix + "vref_v must be > 0");
        if (!std::isfinite(pga_gain) || !(pga_gain > 0.0)) out.push_back(prefix + "pga_gain must be > 0");
        if (resolution_bits < 2 || resolution_bits > 32) out.push_back(prefix + "resolution_bits must be in [2, 32]");
        return out;
    }

    double full_scale_code() const noexcept {
        return std::ldexp(1.0, resolution_bits - 1) - 1.0;
    }

    bool operator==(const AdcConfig&) const = default;
};

inline double code_to_volts(double code, const AdcConfig& adc) {
    if (!std::isfinite(code) || std::abs(code) > adc.full_scale_code() + 1.0) {
        throw ParameterError("code_to_volts: code outside the converter range");
    }
    return code * adc.vref_v / (adc.pga_gain * adc.full_scale_code());
}

}  // namespace emgus::dsp
