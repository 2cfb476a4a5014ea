#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "emgus/core/errors.hpp"
#include "emgus/dsp/trigger.hpp"

namespace emgus::energy {

/// Two-state system power: the EMG subsystem always on with the US probe asleep (p_base),
/// plus p_us_active_delta whenever the US probe is waking or acquiring.
/// Defaults: 7.8 mW at 0 % duty and 29.8 mW at 100 % duty; 320 mAh cell at 3.7 V nominal.
struct PowerModel {
    double p_base_mw = 7.8;
    double p_us_active_delta_mw = 22.0;
    double battery_capacity_mah = 320.0;
    double battery_voltage_v = 3.7;

    double p_full_mw() const noexcept { return p_base_mw + p_us_active_delta_mw; }

    std::vector<std::string> problems(const std::string& prefix = "power_model.") const {
        std::vector<std::string> out;
        if (!std::isfinite(p_base_mw) || !(p_base_mw > 0.0)) out.push_back(prefix + "p_base_mw must be > 0");
        if (!std::isfinite(p_us_active_delta_mw) || p_us_active_delta_mw < 0.0)
            out.push_back(prefix + "p_us_active_delta_mw must be >= 0");
        if (!std::isfinite(battery_capacity_mah) || !(battery_capacity_mah > 0.0))
            out.push_back(prefix + "battery_capacity_mah must be > 0");
        if (!std::isfinite(battery_voltage_v) || !(battery_voltage_v > 0.0))
            out.push_back(prefix + "battery_voltage_v must be > 0");
        return out;
    }

    void validate() const {
        if (auto p = problems(); !p.empty()) throw ValidationError(std::move(p));
    }

    bool operator==(const PowerModel&) const = default;
};

inline double average_power_mw(double duty, const PowerModel& model) {
    if (!std::isfinite(duty) || duty < 0.0 || duty > 1.0) {
        throw ParameterError("average_power: duty must be in [0, 1], got " + std::to_string(duty));
    }
    return model.p_base_mw + duty * model.p_us_active_delta_mw;
}

/// Hours of operation from a full battery.
inline double battery_life_h(double avg_power_mw, const PowerModel& model) {
    if (!std::isfinite(avg_power_mw) || !(avg_power_mw > 0.0)) {
        throw ParameterError("battery_life: average power must be > 0");
    }
    return model.battery_capacity_mah * model.battery_voltage_v / avg_power_mw;
}

/// Fraction of energy saved relative to running both subsystems continuously.
inline double saving_vs_continuous(double avg_power_mw, const PowerModel& model) {
    return 1.0 - avg_power_mw / model.p_full_mw();
}

struct EnergyReport {
    double duration_s = 0.0;
    double effective_us_duty = 0.0;
    double avg_power_mw = 0.0;
    double energy_mwh = 0.0;
    double battery_life_h = 0.0;
    double saving_vs_continuous = 0.0;
    std::size_t activations = 0;
};

/// Integrates system energy over a trigger trace. The US probe draws active power for every
/// asserted interval plus wake_latency_s per activation (wake-up billed at active power),
/// never overlapping the next activation or running past the end of the record. An
/// assertion still open at the end is closed at duration_s.
inline EnergyReport integrate_energy(const dsp::TriggerTrace& trace, double duration_s, const PowerModel& model,
                                     double wake_latency_s) {
    model.validate();
    if (!std::isfinite(duration_s) || !(duration_s > 0.0)) throw ParameterError("integrate_energy: duration must be > 0");
    if (!std::isfinite(wake_latency_s) || wake_latency_s < 0.0)
        throw ParameterError("integrate_energy: wake_latency must be >= 0");
    if (!trace.well_formed()) throw ParameterError("integrate_energy: trace edges must alternate and increase");
    for (const auto& e : trace.edges) {
        if (e.t_s < 0.0 || e.t_s > duration_s) {
            throw ParameterError("integrate_energy: trace edge at " + std::to_string(e.t_s) +
                                 " s lies outside the run duration " + std::to_string(duration_s) + " s");
        }
    }
    const auto intervals = trace.asserted_intervals(duration_s);
    double active_s = 0.0;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const double limit = (i + 1 < intervals.size() ? intervals[i + 1].begin_s : duration_s) - intervals[i].begin_s;
        active_s += std::min(intervals[i].end_s - intervals[i].begin_s + wake_latency_s, limit);
    }
    EnergyReport r;
    r.duration_s = duration_s;
    r.activations = intervals.size();
    r.effective_us_duty = std::clamp(active_s / duration_s, 0.0, 1.0);
    r.avg_power_mw = average_power_mw(r.effective_us_duty, model);
    r.energy_mwh = r.avg_power_mw * duration_s / 3600.0;
    r.battery_life_h = battery_life_h(r.avg_power_mw, model);
    r.saving_vs_continuous = saving_vs_continuous(r.avg_power_mw, model);
    return r;
}

struct SweepRow {
    double duty = 0.0;
    double power_mw = 0.0;
    double battery_life_h = 0.0;
    double saving = 0.0;
};

inline std::vector<SweepRow> duty_sweep(std::span<const double> duties, const PowerModel& model) {
    std::vector<SweepRow> rows;
    rows.reserve(duties.size());
    for (double d : duties) {
        const double p = average_power_mw(d, model);
        rows.push_back({d, p, battery_life_h(p, model), saving_vs_continuous(p, model)});
    }
    return rows;
}

/// Grid used when no duty list is given: 0, 0.1, ..., 1.0.
inline std::vector<double> default_duty_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
    return g;
}

}  // namespace emgus::energy
