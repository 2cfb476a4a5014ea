#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "emgus/core/errors.hpp"
#include "emgus/cosim/scenario.hpp"
#include "emgus/io/signal_file.hpp"

namespace emgus::io {

namespace detail {

/// Reads fields of one JSON object, recording type errors and unknown keys into a shared
/// error list so that every problem in the document is reported at once.
class StrictObject {
public:
    StrictObject(const ojson* j, std::string path, std::vector<std::string>& errors)
        : j_(j), path_(std::move(path)), errors_(errors) {
        if (j_ && !j_->is_object()) {
            errors_.push_back(path_ + " must be an object");
            j_ = nullptr;
        }
    }

    StrictObject(const StrictObject&) = delete;
    StrictObject& operator=(const StrictObject&) = delete;

    ~StrictObject() {
        if (!j_) return;
        for (auto it = j_->begin(); it != j_->end(); ++it) {
            if (!seen_.contains(it.key())) errors_.push_back(path_ + "." + it.key() + ": unknown key");
        }
    }

    template <class T>
    void read(const char* key, T& dst) {
        const ojson* v = find(key);
        if (!v) return;
        if constexpr (std::is_same_v<T, bool>) {
            if (!v->is_boolean()) return type_error(key, "a boolean");
            dst = v->get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v->is_string()) return type_error(key, "a string");
            dst = v->get<std::string>();
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v->is_number()) return type_error(key, "a number");
            dst = v->get<T>();
        } else if constexpr (std::is_unsigned_v<T>) {
            if (!v->is_number_unsigned()) return type_error(key, "a non-negative integer");
            dst = v->get<T>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!v->is_number_integer()) return type_error(key, "an integer");
            dst = v->get<T>();
        } else {
            static_assert(sizeof(T) == 0, "unsupported field type");
        }
    }

    void read(const char* key, std::optional<double>& dst) {
        const ojson* v = find(key);
        if (!v) return;
        if (v->is_null()) {
            dst.reset();
        } else if (v->is_number()) {
            dst = v->get<double>();
        } else {
            type_error(key, "a number or null");
        }
    }

    /// Child object or array; nullptr when absent.
    const ojson* child(const char* key) { return find(key); }

    std::string path(const char* key) const { return path_ + "." + key; }

private:
    const ojson* find(const char* key) {
        if (!j_) return nullptr;
        seen_.insert(key);
        const auto it = j_->find(key);
        return it == j_->end() ? nullptr : &*it;
    }

    void type_error(const char* key, const char* what) { errors_.push_back(path(key) + " must be " + what); }

    const ojson* j_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
};

}  // namespace detail

inline ojson scenario_to_json(const cosim::Scenario& s) {
    ojson j;
    ojson segs = ojson::array();
    for (const auto& seg : s.protocol.segments)
        segs.push_back({{"state", std::string(synth::to_string(seg.state))}, {"duration_s", seg.duration_s}});
    j["protocol"] = {{"segments", segs}, {"repetitions", s.protocol.repetitions}};

    const auto& e = s.emg;
    j["emg_synth"] = {{"fs_hz", e.fs_hz},
                      {"burst_rms_v", e.burst_rms_v},
                      {"baseline_rms_v", e.baseline_rms_v},
                      {"mains_amp_v", e.mains_amp_v},
                      {"mains_freq_hz", e.mains_freq_hz},
                      {"onset_ramp_s", e.onset_ramp_s},
                      {"band_low_hz", e.band_low_hz},
                      {"band_high_hz", e.band_high_hz}};

    const auto& m = s.mechanics;
    j["mechanics"] = {{"em_delay_s", m.em_delay_s},
                      {"depth_rest_mm", m.depth_rest_mm},
                      {"depth_contracted_mm", m.depth_contracted_mm},
                      {"rise_time_s", m.rise_time_s}};

    const auto& u = s.us;
    ojson scat = ojson::array();
    for (const auto& sc : u.scatterers) scat.push_back({{"depth_mm", sc.depth_mm}, {"amplitude", sc.amplitude}});
    j["us"] = {{"f_center_hz", u.f_center_hz},
               {"fs_hz", u.fs_hz},
               {"samples_per_scanline", u.samples_per_scanline},
               {"speed_of_sound_m_s", u.speed_of_sound_m_s},
               {"pulse_bandwidth_fraction", u.pulse_bandwidth_fraction},
               {"noise_rms", u.noise_rms},
               {"attenuation_db_per_cm_mhz", u.attenuation_db_per_cm_mhz},
               {"reflector_amplitude", u.reflector_amplitude},
               {"scatterers", scat},
               {"wake_latency_s", s.us_timing.wake_latency_s},
               {"frame_period_s", s.us_timing.frame_period_s},
               {"force_continuous", s.us_timing.force_continuous}};

    const auto& p = s.pipeline;
    j["pipeline"] = {
        {"sample_rate_hz", p.sample_rate_hz},
        {"bandpass", {{"enabled", p.bandpass.enabled}, {"low_hz", p.bandpass.low_hz}, {"high_hz", p.bandpass.high_hz}, {"order", p.bandpass.order}}},
        {"notch", {{"enabled", p.notch.enabled}, {"freq_hz", p.notch.freq_hz}, {"q", p.notch.q}}},
        {"envelope", {{"window", p.envelope_window}}},
        {"threshold",
         {{"assert_v", p.comparator.threshold_assert_v},
          {"hysteresis_ratio", p.comparator.hysteresis_ratio},
          {"min_hold_s", p.comparator.min_hold_s}}},
        {"settle_s", p.settle_s},
        {"adc", {{"vref_v", p.adc.vref_v}, {"pga_gain", p.adc.pga_gain}, {"resolution_bits", p.adc.resolution_bits}}}};

    const auto& pm = s.power;
    j["power_model"] = {{"p_base_mw", pm.p_base_mw},
                        {"p_us_active_delta_mw", pm.p_us_active_delta_mw},
                        {"battery_capacity_mah", pm.battery_capacity_mah},
                        {"battery_voltage_v", pm.battery_voltage_v}};

    j["run"] = {{"duration_s", s.run.duration_s ? ojson(*s.run.duration_s) : ojson(nullptr)},
                {"seed", s.run.seed},
                {"output_dir", s.run.output_dir}};
    return j;
}

/// Parses a scenario document. Absent keys keep their defaults; unknown keys, type errors
/// and failed validation are all reported together in one ValidationError.
inline cosim::Scenario scenario_from_json(const ojson& j) {
    using detail::StrictObject;
    cosim::Scenario s;
    std::vector<std::string> errors;
    {
        StrictObject root(&j, "scenario", errors);

        if (const ojson* pj = root.child("protocol")) {
            StrictObject o(pj, "protocol", errors);
            if (const ojson* segs = o.child("segments")) {
                if (!segs->is_array()) {
                    errors.push_back("protocol.segments must be an array");
                } else {
                    s.protocol.segments.clear();
                    for (std::size_t i = 0; i < segs->size(); ++i) {
                        const std::string path = "protocol.segments[" + std::to_string(i) + "]";
                        StrictObject so(&(*segs)[i], path, errors);
                        std::string state = "rest";
                        synth::Segment seg;
                        so.read("state", state);
                        so.read("duration_s", seg.duration_s);
                        if (state == "rest") {
                            seg.state = synth::SegmentState::rest;
                        } else if (state == "contract") {
                            seg.state = synth::SegmentState::contract;
                        } else {
                            errors.push_back(path + ".state must be \"rest\" or \"contract\"");
                        }
                        s.protocol.segments.push_back(seg);
                    }
                }
            }
            o.read("repetitions", s.protocol.repetitions);
        }

        if (const ojson* ej = root.child("emg_synth")) {
            StrictObject o(ej, "emg_synth", errors);
            auto& e = s.emg;
            o.read("fs_hz", e.fs_hz);
            o.read("burst_rms_v", e.burst_rms_v);
            o.read("baseline_rms_v", e.baseline_rms_v);
            o.read("mains_amp_v", e.mains_amp_v);
            o.read("mains_freq_hz", e.mains_freq_hz);
            o.read("onset_ramp_s", e.onset_ramp_s);
            o.read("band_low_hz", e.band_low_hz);
            o.read("band_high_hz", e.band_high_hz);
        }

        if (const ojson* mj = root.child("mechanics")) {
            StrictObject o(mj, "mechanics", errors);
            auto& m = s.mechanics;
            o.read("em_delay_s", m.em_delay_s);
            o.read("depth_rest_mm", m.depth_rest_mm);
            o.read("depth_contracted_mm", m.depth_contracted_mm);
            o.read("rise_time_s", m.rise_time_s);
        }

        if (const ojson* uj = root.child("us")) {
            StrictObject o(uj, "us", errors);
            auto& u = s.us;
            o.read("f_center_hz", u.f_center_hz);
            o.read("fs_hz", u.fs_hz);
            o.read("samples_per_scanline", u.samples_per_scanline);
            o.read("speed_of_sound_m_s", u.speed_of_sound_m_s);
            o.read("pulse_bandwidth_fraction", u.pulse_bandwidth_fraction);
            o.read("noise_rms", u.noise_rms);
            o.read("attenuation_db_per_cm_mhz", u.attenuation_db_per_cm_mhz);
            o.read("reflector_amplitude", u.reflector_amplitude);
            if (const ojson* sj = o.child("scatterers")) {
                if (!sj->is_array()) {
                    errors.push_back("us.scatterers must be an array");
                } else {
                    u.scatterers.clear();
                    for (std::size_t i = 0; i < sj->size(); ++i) {
                        StrictObject so(&(*sj)[i], "us.scatterers[" + std::to_string(i) + "]", errors);
                        synth::Scatterer sc;
                        so.read("depth_mm", sc.depth_mm);
                        so.read("amplitude", sc.amplitude);
                        u.scatterers.push_back(sc);
                    }
                }
            }
            o.read("wake_latency_s", s.us_timing.wake_latency_s);
            o.read("frame_period_s", s.us_timing.frame_period_s);
            o.read("force_continuous", s.us_timing.force_continuous);
        }

        if (const ojson* pj = root.child("pipeline")) {
            StrictObject o(pj, "pipeline", errors);
            auto& p = s.pipeline;
            o.read("sample_rate_hz", p.sample_rate_hz);
            if (const ojson* bj = o.child("bandpass")) {
                StrictObject b(bj, "pipeline.bandpass", errors);
                b.read("enabled", p.bandpass.enabled);
                b.read("low_hz", p.bandpass.low_hz);
                b.read("high_hz", p.bandpass.high_hz);
                b.read("order", p.bandpass.order);
            }
            if (const ojson* nj = o.child("notch")) {
                StrictObject n(nj, "pipeline.notch", errors);
                n.read("enabled", p.notch.enabled);
                n.read("freq_hz", p.notch.freq_hz);
                n.read("q", p.notch.q);
            }
            if (const ojson* vj = o.child("envelope")) {
                StrictObject v(vj, "pipeline.envelope", errors);
                v.read("window", p.envelope_window);
            }
            if (const ojson* tj = o.child("threshold")) {
                StrictObject t(tj, "pipeline.threshold", errors);
                t.read("assert_v", p.comparator.threshold_assert_v);
                t.read("hysteresis_ratio", p.comparator.hysteresis_ratio);
                t.read("min_hold_s", p.comparator.min_hold_s);
            }
            o.read("settle_s", p.settle_s);
            if (const ojson* aj = o.child("adc")) {
                StrictObject a(aj, "pipeline.adc", errors);
                a.read("vref_v", p.adc.vref_v);
                a.read("pga_gain", p.adc.pga_gain);
                a.read("resolution_bits", p.adc.resolution_bits);
            }
        }

        if (const ojson* wj = root.child("power_model")) {
            StrictObject o(wj, "power_model", errors);
            o.read("p_base_mw", s.power.p_base_mw);
            o.read("p_us_active_delta_mw", s.power.p_us_active_delta_mw);
            o.read("battery_capacity_mah", s.power.battery_capacity_mah);
            o.read("battery_voltage_v", s.power.battery_voltage_v);
        }

        if (const ojson* rj = root.child("run")) {
            StrictObject o(rj, "run", errors);
            o.read("duration_s", s.run.duration_s);
            o.read("seed", s.run.seed);
            o.read("output_dir", s.run.output_dir);
        }
    }  // unknown-key checks run here
    if (errors.empty()) errors = s.problems();
    if (!errors.empty()) throw ValidationError(std::move(errors));
    return s;
}

inline cosim::Scenario load_scenario(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("scenario file not found: " + path.string());
    const std::string text = read_text(path);
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError({path.string() + ": " + e.what()});
    }
    return scenario_from_json(j);
}

inline void save_scenario(const std::filesystem::path& path, const cosim::Scenario& s) {
    write_json(path, scenario_to_json(s));
}

}  // namespace emgus::io
