#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "emgus/core/errors.hpp"

namespace emgus::dsp {

/// Sliding waveform length: sum of |x[i] - x[i-1]| over the most recent `window` samples,
/// updated every sample. Before `window` samples have arrived, the missing history is
/// the first received sample repeated, so the output starts at 0.
///
/// The running sum is updated in O(1). A bound on its accumulated rounding error is
/// tracked, and the sum is rebuilt from the stored differences whenever the bound exceeds
/// 1e-13 of the current value. This keeps the result within 1e-12 relative of a direct
/// recomputation even after the envelope collapses from large to small values.
class WaveformLength {
public:
    static constexpr std::size_t kDefaultWindow = 60;

    explicit WaveformLength(std::size_t window = kDefaultWindow) : window_(window) {
        if (window < 2) throw ParameterError("WaveformLength: window must be >= 2 samples");
        diffs_.assign(window - 1, 0.0);
    }

    double push(double x) {
        if (!std::isfinite(x)) throw ParameterError("WaveformLength: non-finite input sample");
        if (!primed_) {
            last_ = x;
            primed_ = true;
        }
        const double d = std::abs(x - last_);
        last_ = x;
        const double oldest = diffs_[head_];
        diffs_[head_] = d;
        head_ = (head_ + 1) % diffs_.size();

        constexpr double u = std::numeric_limits<double>::epsilon() / 2.0;
        const double t1 = sum_ - oldest;
        const double t2 = t1 + d;
        err_bound_ += u * (std::abs(t1) + std::abs(t2));
        sum_ = t2;
        if (sum_ < 0.0 || err_bound_ > kRebuildTolerance * sum_) rebuild();
        return sum_;
    }

    double value() const noexcept { return sum_; }
    std::size_t window() const noexcept { return window_; }
    bool primed() const noexcept { return primed_; }

    void reset() noexcept {
        std::fill(diffs_.begin(), diffs_.end(), 0.0);
        head_ = 0;
        last_ = 0.0;
        sum_ = 0.0;
        err_bound_ = 0.0;
        primed_ = false;
    }

private:
    static constexpr double kRebuildTolerance = 1e-13;

    void rebuild() noexcept {
        // Oldest to newest.
        double s = 0.0;
        for (std::size_t k = 0; k < diffs_.size(); ++k) s += diffs_[(head_ + k) % diffs_.size()];
        sum_ = s;
        err_bound_ = static_cast<double>(diffs_.size()) * std::numeric_limits<double>::epsilon() / 2.0 * s;
    }

    std::size_t window_;
    std::vector<double> diffs_;
    std::size_t head_ = 0;
    double last_ = 0.0;
    double sum_ = 0.0;
    double err_bound_ = 0.0;
    bool primed_ = false;
};

}  // namespace emgus::dsp
