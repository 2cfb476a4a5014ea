#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace emgus {

/// Uniformly sampled signal. Sample i sits at start_s + i / sample_rate_hz.
struct TimedSeries {
    double sample_rate_hz = 500.0;
    double start_s = 0.0;
    std::string unit = "V";
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }

    double time_at(std::size_t i) const noexcept {
        return start_s + static_cast<double>(i) / sample_rate_hz;
    }

    double duration_s() const noexcept {
        return static_cast<double>(values.size()) / sample_rate_hz;
    }

    bool operator==(const TimedSeries&) const = default;
};

}  // namespace emgus
