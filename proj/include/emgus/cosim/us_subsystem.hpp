#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string_view>

#include "emgus/cosim/scenario.hpp"

namespace emgus::cosim {

/// Simulation time. Integer nanoseconds keep frame ticks exact over long runs.
using SimTime = std::chrono::duration<std::int64_t, std::nano>;

inline SimTime to_sim_time(double seconds) { return SimTime{std::llround(seconds * 1e9)}; }
inline double to_seconds(SimTime t) { return static_cast<double>(t.count()) / 1e9; }

enum class UsState { sleep, waking, acquiring };

inline std::string_view to_string(UsState s) noexcept {
    switch (s) {
        case UsState::sleep: return "sleep";
        case UsState::waking: return "waking";
        case UsState::acquiring: return "acquiring";
    }
    return "?";
}

/// Ultrasound probe state machine. Sleep -> Waking on trigger assert, Waking -> Acquiring
/// after wake_latency, frames every frame_period from the end of the wake-up, any state ->
/// Sleep on deassert.
class UsSubsystem {
public:
    explicit UsSubsystem(const UsTiming& timing)
        : wake_(to_sim_time(timing.wake_latency_s)),
          period_(to_sim_time(timing.frame_period_s)),
          forced_(timing.force_continuous) {
        if (period_.count() <= 0) throw ParameterError("UsSubsystem: frame period must be >= 1 ns");
        if (forced_) {
            state_ = UsState::acquiring;
            burst_start_ = SimTime{0};
            next_ = burst_start_;
        }
    }

    void on_trigger(bool asserted, SimTime t) {
        if (forced_) return;
        if (asserted) {
            if (state_ != UsState::sleep) return;
            state_ = UsState::waking;
            burst_start_ = t + wake_;
            next_ = burst_start_;
            frame_in_burst_ = 0;
        } else {
            state_ = UsState::sleep;
        }
    }

    /// Fires every pending event strictly before t_end; on_frame(SimTime) per acquired frame.
    template <class OnFrame>
    void advance_until(SimTime t_end, OnFrame&& on_frame) {
        while (state_ != UsState::sleep && next_ < t_end) {
            state_ = UsState::acquiring;
            on_frame(next_);
            ++frame_in_burst_;
            next_ = burst_start_ + period_ * frame_in_burst_;
        }
    }

    UsState state() const noexcept { return state_; }

private:
    SimTime wake_;
    SimTime period_;
    bool forced_;
    UsState state_ = UsState::sleep;
    SimTime burst_start_{0};
    SimTime next_{0};
    std::int64_t frame_in_burst_ = 0;
};

}  // namespace emgus::cosim
