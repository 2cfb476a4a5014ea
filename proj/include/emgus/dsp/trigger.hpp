#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emgus/core/errors.hpp"

namespace emgus::dsp {

enum class EdgeKind { rising, falling };

inline std::string_view to_string(EdgeKind k) noexcept {
    return k == EdgeKind::rising ? "rising" : "falling";
}

struct TriggerEdge {
    double t_s = 0.0;
    EdgeKind kind = EdgeKind::rising;

    bool operator==(const TriggerEdge&) const = default;
};

struct AssertedInterval {
    double begin_s = 0.0;
    double end_s = 0.0;
    bool closed = true;  // false when the line was still high at the end of the record
};

/// Timestamped edges of the trigger line. Well-formed traces are strictly increasing in
/// time and alternate rising/falling, starting with rising.
struct TriggerTrace {
    std::vector<TriggerEdge> edges;

    std::size_t rising_count() const noexcept {
        std::size_t n = 0;
        for (const auto& e : edges) n += e.kind == EdgeKind::rising;
        return n;
    }

    std::vector<double> rising_times() const {
        std::vector<double> out;
        for (const auto& e : edges)
            if (e.kind == EdgeKind::rising) out.push_back(e.t_s);
        return out;
    }

    bool well_formed() const noexcept {
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto want = i % 2 == 0 ? EdgeKind::rising : EdgeKind::falling;
            if (edges[i].kind != want) return false;
            if (i > 0 && !(edges[i].t_s > edges[i - 1].t_s)) return false;
        }
        return true;
    }

    /// High intervals; an unterminated final assertion is closed at end_s.
    std::vector<AssertedInterval> asserted_intervals(double end_s) const {
        std::vector<AssertedInterval> out;
        for (std::size_t i = 0; i < edges.size(); i += 2) {
            if (i + 1 < edges.size()) {
                out.push_back({edges[i].t_s, edges[i + 1].t_s, true});
            } else {
                out.push_back({edges[i].t_s, end_s, false});
            }
        }
        return out;
    }

    bool operator==(const TriggerTrace&) const = default;
};

struct ComparatorConfig {
    double threshold_assert_v = 0.264;
    /// threshold_deassert = threshold_assert * hysteresis_ratio; 1.0 disables hysteresis.
    double hysteresis_ratio = 1.0;
    double min_hold_s = 0.0;

    double threshold_deassert_v() const noexcept { return threshold_assert_v * hysteresis_ratio; }

    std::vector<std::string> problems(std::string_view prefix = "") const {
        std::vector<std::string> out;
        const std::string p(prefix);
        if (!std::isfinite(threshold_assert_v) || !(threshold_assert_v > 0.0))
            out.push_back(p + "threshold_assert_v must be finite and > 0");
        if (!std::isfinite(hysteresis_ratio) || !(hysteresis_ratio > 0.0) || hysteresis_ratio > 1.0)
            out.push_back(p + "hysteresis_ratio must be in (0, 1]");
        if (!std::isfinite(min_hold_s) || min_hold_s < 0.0) out.push_back(p + "min_hold_s must be >= 0");
        return out;
    }

    bool operator==(const ComparatorConfig&) const = default;
};

struct TriggerUpdate {
    bool asserted = false;
    std::optional<TriggerEdge> edge;
};

/// Threshold state machine driving the trigger line.
///   deasserted -> asserted   when envelope >  threshold_assert
///   asserted   -> deasserted when envelope <  threshold_deassert and held >= min_hold
/// A value exactly at the threshold does not assert.
class TriggerComparator {
public:
    explicit TriggerComparator(ComparatorConfig cfg = {}) : cfg_(cfg) {
        if (auto p = cfg_.problems(); !p.empty()) throw ParameterError("TriggerComparator: " + p.front());
    }

    TriggerUpdate update(double envelope, double t_s) {
        if (!std::isfinite(envelope) || !std::isfinite(t_s)) {
            throw ParameterError("TriggerComparator: non-finite envelope or time");
        }
        if (last_t_ && !(t_s > *last_t_)) {
            throw ParameterError("TriggerComparator: time must be strictly increasing");
        }
        last_t_ = t_s;

        TriggerUpdate out;
        if (!asserted_) {
            if (envelope > cfg_.threshold_assert_v) {
                asserted_ = true;
                asserted_at_ = t_s;
                out.edge = TriggerEdge{t_s, EdgeKind::rising};
            }
        } else if (envelope < cfg_.threshold_deassert_v() && t_s - asserted_at_ >= cfg_.min_hold_s) {
            asserted_ = false;
            out.edge = TriggerEdge{t_s, EdgeKind::falling};
        }
        out.asserted = asserted_;
        return out;
    }

    bool asserted() const noexcept { return asserted_; }
    const ComparatorConfig& config() const noexcept { return cfg_; }

private:
    ComparatorConfig cfg_;
    bool asserted_ = false;
    double asserted_at_ = 0.0;
    std::optional<double> last_t_;
};

}  // namespace emgus::dsp
