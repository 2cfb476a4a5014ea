#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emgus/core/errors.hpp"
#include "emgus/cosim/latency.hpp"
#include "emgus/cosim/mmode.hpp"
#include "emgus/cosim/scenario.hpp"
#include "emgus/cosim/simulate.hpp"
#include "emgus/dsp/adc.hpp"
#include "emgus/dsp/pipeline.hpp"
#include "emgus/energy/power.hpp"
#include "emgus/io/scenario_json.hpp"
#include "emgus/io/signal_file.hpp"
#include "emgus/synth/emg.hpp"
#include "emgus/synth/mechanics.hpp"

namespace emgus::io {

// Artifact file names shared by the writers and the report reader.
inline constexpr const char* kEmgCsv = "emg.csv";
inline constexpr const char* kFilteredCsv = "emg_filtered.csv";
inline constexpr const char* kEnvelopeCsv = "envelope.csv";
inline constexpr const char* kForceCsv = "force.csv";
inline constexpr const char* kEdgesCsv = "trigger_edges.csv";
inline constexpr const char* kFramesCsv = "frames.csv";
inline constexpr const char* kScanlinesF32 = "scanlines.f32";
inline constexpr const char* kMModeF32 = "mmode.f32";
inline constexpr const char* kLatencyJson = "latency.json";
inline constexpr const char* kEnergyJson = "energy.json";
inline constexpr const char* kTruthJson = "ground_truth.json";
inline constexpr const char* kScenarioJson = "scenario.json";
inline constexpr const char* kSweepCsv = "sweep.csv";

inline void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

inline ojson optional_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

inline ojson truth_to_json(const std::vector<synth::ContractionInterval>& contractions, double em_delay_s,
                           double duration_s, std::uint64_t seed) {
    ojson onsets = ojson::array();
    ojson spans = ojson::array();
    for (const auto& c : contractions) {
        onsets.push_back(c.onset_s);
        spans.push_back({{"onset_s", c.onset_s}, {"offset_s", c.offset_s}});
    }
    return {{"duration_s", duration_s}, {"seed", seed}, {"em_delay_s", em_delay_s}, {"onsets_s", onsets}, {"contractions", spans}};
}

struct TruthFile {
    std::vector<double> onsets_s;
    double em_delay_s = 0.0;
};

inline TruthFile read_truth(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("ground truth not found: " + path.string());
    const ojson j = read_json(path);
    TruthFile t;
    try {
        t.onsets_s = j.at("onsets_s").get<std::vector<double>>();
        t.em_delay_s = j.at("em_delay_s").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return t;
}

/// Latency summary; `first_frame` and `frames` are present only for full co-simulation runs.
inline ojson latency_to_json(const cosim::LatencyReport& rep, const std::vector<bool>* first_frame = nullptr,
                             const cosim::SimulationResult* run = nullptr) {
    ojson per = ojson::array();
    for (std::size_t i = 0; i < rep.contractions.size(); ++i) {
        const auto& c = rep.contractions[i];
        ojson row = {{"onset_s", c.onset_s},
                     {"rising_s", optional_json(c.rising_s)},
                     {"latency_s", optional_json(c.latency_s)},
                     {"margin_s", optional_json(c.margin_s)}};
        if (first_frame) row["first_frame_before_motion"] = static_cast<bool>((*first_frame)[i]);
        per.push_back(std::move(row));
    }
    ojson j = {{"em_delay_s", rep.em_delay_s},
               {"contractions", rep.contractions.size()},
               {"matched", rep.matched},
               {"missed", rep.missed},
               {"spurious", rep.spurious},
               {"retriggers", rep.retriggers},
               {"min_s", optional_json(rep.min_s)},
               {"mean_s", optional_json(rep.mean_s)},
               {"max_s", optional_json(rep.max_s)},
               {"worst_margin_s", optional_json(rep.worst_margin_s())},
               {"per_contraction", per}};
    if (run) {
        const auto counts = cosim::frames_per_activation(*run);
        j["frames"] = {{"total", run->frames.size()}, {"per_activation", counts}};
    }
    return j;
}

inline ojson energy_to_json(const energy::EnergyReport& e, const energy::PowerModel& model, double wake_latency_s) {
    return {{"duration_s", e.duration_s},
            {"effective_us_duty", e.effective_us_duty},
            {"avg_power_mw", e.avg_power_mw},
            {"energy_mwh", e.energy_mwh},
            {"battery_life_h", e.battery_life_h},
            {"saving_vs_continuous", e.saving_vs_continuous},
            {"activations", e.activations},
            {"wake_latency_s", wake_latency_s},
            {"power_model",
             {{"p_base_mw", model.p_base_mw},
              {"p_us_active_delta_mw", model.p_us_active_delta_mw},
              {"battery_capacity_mah", model.battery_capacity_mah},
              {"battery_voltage_v", model.battery_voltage_v}}}};
}

inline ojson provenance(const char* source, std::uint64_t seed) { return {{"source", source}, {"seed", seed}}; }

/// EMG, force and ground truth for the scenario, without running the trigger chain.
inline void cmd_synth(const cosim::Scenario& s, const fs::path& out_dir, std::ostream& log) {
    s.validate();
    ensure_dir(out_dir);
    const double duration = s.duration_s();
    const auto emg = synth::synth_emg(s.protocol, s.emg_config(), duration);
    const auto force = synth::synth_force_series(emg.contractions, s.mechanics, s.emg.fs_hz, emg.signal.size());
    write_series(out_dir / kEmgCsv, emg.signal, provenance("synth", s.run.seed));
    write_series(out_dir / kForceCsv, force, provenance("synth", s.run.seed));
    write_json(out_dir / kTruthJson, truth_to_json(emg.contractions, s.mechanics.em_delay_s, duration, s.run.seed));
    log << "synth: " << emg.signal.size() << " samples, " << emg.onsets_s.size() << " contractions -> "
        << out_dir.string() << "\n";
}

inline void write_frames(const fs::path& out_dir, const cosim::UsFrameSet& set) {
    std::string csv = "index,t_s,true_depth_mm\n";
    std::vector<float> lines;
    lines.reserve(set.size() * set.config.samples_per_scanline);
    for (std::size_t i = 0; i < set.frames.size(); ++i) {
        const auto& f = set.frames[i];
        csv += std::to_string(i);
        csv += ',';
        append_double(csv, f.t_s);
        csv += ',';
        append_double(csv, f.true_depth_mm);
        csv += '\n';
        lines.insert(lines.end(), f.scanline.begin(), f.scanline.end());
    }
    write_text(out_dir / kFramesCsv, csv);
    write_f32(out_dir / kScanlinesF32, lines);
    write_json(sidecar_path(out_dir / kScanlinesF32),
               {{"frames", set.size()},
                {"samples_per_frame", set.config.samples_per_scanline},
                {"fs_us_hz", set.config.fs_hz},
                {"f_center_hz", set.config.f_center_hz},
                {"dtype", "float32-le"}});

    cosim::MModeImage img;
    img.cols = set.config.samples_per_scanline;
    img.depth_step_mm = set.config.sample_depth_mm(1.0);
    if (!set.empty()) img = cosim::build_mmode(set);
    write_f32(out_dir / kMModeF32, img.data);
    write_json(sidecar_path(out_dir / kMModeF32),
               {{"rows", img.rows}, {"cols", img.cols}, {"depth_step_mm", img.depth_step_mm}, {"dtype", "float32-le"}});
}

/// Full co-simulation with every artifact written to out_dir.
inline cosim::SimulationResult cmd_run(const cosim::Scenario& s, const fs::path& out_dir, std::ostream& log) {
    const auto r = cosim::simulate(s);
    ensure_dir(out_dir);
    save_scenario(out_dir / kScenarioJson, s);
    const ojson prov = provenance("run", s.run.seed);
    write_series(out_dir / kEmgCsv, r.raw, prov);
    write_series(out_dir / kFilteredCsv, r.filtered, prov);
    write_series(out_dir / kEnvelopeCsv, r.envelope, prov);
    write_series(out_dir / kForceCsv, r.force, prov);
    write_trigger_edges(out_dir / kEdgesCsv, r.trace);
    write_frames(out_dir, r.frames);

    const auto lat = cosim::measure_latency(r);
    const auto ffbm = cosim::first_frame_before_motion(r);
    write_json(out_dir / kLatencyJson, latency_to_json(lat, &ffbm, &r));
    const auto e = energy::integrate_energy(r.trace, r.duration_s, s.power, s.us_timing.wake_latency_s);
    write_json(out_dir / kEnergyJson, energy_to_json(e, s.power, s.us_timing.wake_latency_s));
    write_json(out_dir / kTruthJson, truth_to_json(r.truth.contractions, r.truth.em_delay_s, r.duration_s, s.run.seed));

    log << "run: " << r.raw.size() << " samples, " << r.trace.rising_count() << " activations, " << r.frames.size()
        << " frames, " << e.avg_power_mw << " mW -> " << out_dir.string() << "\n";
    return r;
}

enum class SampleUnits { volts, adc_code };

struct ReplayOptions {
    SampleUnits units = SampleUnits::volts;
    std::optional<fs::path> truth;
};

/// Runs the trigger chain over a recorded EMG CSV.
inline dsp::PipelineOutput cmd_replay(const fs::path& emg_csv, const dsp::PipelineConfig& cfg, const fs::path& out_dir,
                                      const ReplayOptions& opt, std::ostream& log) {
    cfg.validate();
    if (!fs::exists(emg_csv)) throw IoError("EMG file not found: " + emg_csv.string());
    TimedSeries raw = read_series(emg_csv);
    if (raw.empty()) raw.sample_rate_hz = cfg.sample_rate_hz;
    if (opt.units == SampleUnits::adc_code) {
        for (double& v : raw.values) v = dsp::code_to_volts(v, cfg.adc);
        raw.unit = "V";
    }
    const auto out = dsp::run_pipeline(raw, cfg);
    ensure_dir(out_dir);
    const ojson prov = {{"source", "replay"}, {"input", emg_csv.filename().string()}};
    write_series(out_dir / kFilteredCsv, out.filtered, prov);
    write_series(out_dir / kEnvelopeCsv, out.envelope, prov);
    write_trigger_edges(out_dir / kEdgesCsv, out.trace);
    if (opt.truth) {
        const auto t = read_truth(*opt.truth);
        write_json(out_dir / kLatencyJson, latency_to_json(cosim::measure_latency(out.trace, t.onsets_s, t.em_delay_s)));
    }
    log << "replay: " << raw.size() << " samples, " << out.trace.rising_count() << " activations -> "
        << out_dir.string() << "\n";
    return out;
}

struct SweepRequest {
    std::vector<double> duties;            // used when rates is empty
    std::vector<double> rates_hz;          // contraction rates; duty = contraction_s * rate
    double contraction_s = 0.2;
    double rate_hz = 1.0;                  // repetition rate for duty grids
    bool simulate = false;
    double simulated_duration_s = 60.0;
};

struct SweepPoint {
    double duty = 0.0;
    double period_s = 1.0;
    energy::SweepRow analytic;
    std::optional<double> simulated_mw;
};

/// Periodic rest-then-contract protocol with the given contraction length, long enough
/// to cover total_s. Zero-length segments are dropped.
inline synth::ContractionProtocol periodic_protocol(double contract_s, double period_s, double total_s) {
    synth::ContractionProtocol p;
    p.segments.clear();
    if (period_s - contract_s > 0.0) p.segments.push_back({synth::SegmentState::rest, period_s - contract_s});
    if (contract_s > 0.0) p.segments.push_back({synth::SegmentState::contract, contract_s});
    p.repetitions = std::max(1, static_cast<int>(std::ceil(total_s / period_s - 1e-9)));
    return p;
}

inline std::vector<SweepPoint> run_sweep(const cosim::Scenario& base, const SweepRequest& req) {
    std::vector<SweepPoint> points;
    if (!req.rates_hz.empty()) {
        if (!std::isfinite(req.contraction_s) || !(req.contraction_s > 0.0))
            throw ParameterError("sweep: contraction length must be > 0");
        for (double rate : req.rates_hz) {
            if (!std::isfinite(rate) || !(rate > 0.0)) throw ParameterError("sweep: rates must be > 0");
            points.push_back({req.contraction_s * rate, 1.0 / rate, {}, {}});
        }
    } else {
        if (!std::isfinite(req.rate_hz) || !(req.rate_hz > 0.0)) throw ParameterError("sweep: rate must be > 0");
        for (double d : req.duties) points.push_back({d, 1.0 / req.rate_hz, {}, {}});
    }
    if (points.empty()) throw ParameterError("sweep: grid is empty");
    for (const auto& p : points) {
        if (!std::isfinite(p.duty) || p.duty < 0.0 || p.duty > 1.0)
            throw ParameterError("sweep: duty " + format_double(p.duty) + " is outside [0, 1]");
    }
    base.power.validate();
    for (auto& p : points) p.analytic = energy::duty_sweep(std::span<const double>(&p.duty, 1), base.power).front();
    if (!req.simulate) return points;

    // One independent simulation per grid point; results land in their own slot.
    std::vector<std::future<double>> jobs;
    jobs.reserve(points.size());
    for (const auto& p : points) {
        cosim::Scenario s = base;
        s.protocol = periodic_protocol(p.duty * p.period_s, p.period_s, req.simulated_duration_s);
        s.run.duration_s = req.simulated_duration_s;
        s.validate();
        jobs.push_back(std::async(std::launch::async, [s] {
            const auto r = cosim::simulate(s);
            return energy::integrate_energy(r.trace, r.duration_s, s.power, s.us_timing.wake_latency_s).avg_power_mw;
        }));
    }
    for (std::size_t i = 0; i < points.size(); ++i) points[i].simulated_mw = jobs[i].get();
    return points;
}

inline std::vector<SweepPoint> cmd_sweep(const cosim::Scenario& base, const SweepRequest& req, const fs::path& out_dir,
                                         std::ostream& log) {
    const auto points = run_sweep(base, req);
    ensure_dir(out_dir);
    std::string csv = "duty,analytic_mw,simulated_mw,battery_h,saving\n";
    for (const auto& p : points) {
        append_double(csv, p.duty);
        csv += ',';
        append_double(csv, p.analytic.power_mw);
        csv += ',';
        if (p.simulated_mw) append_double(csv, *p.simulated_mw);
        csv += ',';
        append_double(csv, p.analytic.battery_life_h);
        csv += ',';
        append_double(csv, p.analytic.saving);
        csv += '\n';
    }
    write_text(out_dir / kSweepCsv, csv);
    log << "sweep: " << points.size() << " points -> " << (out_dir / kSweepCsv).string() << "\n";
    return points;
}

namespace detail {

inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string ms(const ojson& v) { return v.is_null() ? std::string("n/a") : fixed(v.get<double>() * 1e3, 1) + " ms"; }

}  // namespace detail

inline constexpr double kLatencyBudgetS = 0.030;

/// Human-readable summary of a run directory. Returns false when a check fails.
inline bool cmd_report(const fs::path& run_dir, std::ostream& out) {
    for (const char* name : {kLatencyJson, kEnergyJson}) {
        if (!fs::exists(run_dir / name)) throw IoError("missing artifact: " + (run_dir / name).string());
    }
    const ojson lat = read_json(run_dir / kLatencyJson);
    const ojson en = read_json(run_dir / kEnergyJson);
    using detail::fixed;
    using detail::ms;
    bool all_pass = true;
    try {
        out << "contractions: " << lat.at("contractions").get<std::size_t>()
            << "  matched: " << lat.at("matched").get<std::size_t>()
            << "  missed: " << lat.at("missed").get<std::size_t>()
            << "  spurious: " << lat.at("spurious").get<std::size_t>()
            << "  retriggers: " << lat.at("retriggers").get<std::size_t>() << "\n";
        out << "latency min/mean/max: " << ms(lat.at("min_s")) << " / " << ms(lat.at("mean_s")) << " / "
            << ms(lat.at("max_s")) << "\n";
        out << "margin vs electromechanical delay (" << ms(lat.at("em_delay_s")) << "): " << ms(lat.at("worst_margin_s"))
            << "\n";
        if (lat.contains("frames")) {
            const auto per = lat.at("frames").at("per_activation").get<std::vector<std::size_t>>();
            out << "frames: " << lat.at("frames").at("total").get<std::size_t>() << " total";
            if (!per.empty())
                out << ", per activation " << *std::min_element(per.begin(), per.end()) << ".."
                    << *std::max_element(per.begin(), per.end());
            out << "\n";
        }
        out << "effective US duty: " << fixed(en.at("effective_us_duty").get<double>(), 4) << "\n";
        out << "average power: " << fixed(en.at("avg_power_mw").get<double>(), 2) << " mW\n";
        out << "battery life: " << fixed(en.at("battery_life_h").get<double>(), 1) << " h\n";
        out << "saving vs continuous: " << fixed(en.at("saving_vs_continuous").get<double>() * 100.0, 1) << "%\n";

        energy::PowerModel model;
        const ojson& pm = en.at("power_model");
        model.p_base_mw = pm.at("p_base_mw").get<double>();
        model.p_us_active_delta_mw = pm.at("p_us_active_delta_mw").get<double>();
        model.battery_capacity_mah = pm.at("battery_capacity_mah").get<double>();
        model.battery_voltage_v = pm.at("battery_voltage_v").get<double>();
        model.validate();
        const double p20 = energy::average_power_mw(0.2, model);
        out << "reference 20% duty: " << fixed(p20, 1) << " mW, saving "
            << fixed(energy::saving_vs_continuous(p20, model) * 100.0, 1) << "%\n";

        const ojson& max_s = lat.at("max_s");
        const bool latency_ok = !max_s.is_null() && max_s.get<double>() <= kLatencyBudgetS;
        all_pass = all_pass && latency_ok;
        out << "max latency \xE2\x89\xA4 30 ms: " << (latency_ok ? "PASS" : "FAIL") << "\n";

        const ojson& per = lat.at("per_contraction");
        bool have_frames = !per.empty();
        bool before = true;
        for (const auto& c : per) {
            if (!c.contains("first_frame_before_motion")) {
                have_frames = false;
                break;
            }
            before = before && c.at("first_frame_before_motion").get<bool>();
        }
        if (have_frames) {
            all_pass = all_pass && before;
            out << "first frame before motion: " << (before ? "PASS" : "FAIL") << "\n";
        } else {
            out << "first frame before motion: n/a\n";
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(run_dir.string() + ": malformed artifact: " + e.what());
    }
    return all_pass;
}

}  // namespace emgus::io
