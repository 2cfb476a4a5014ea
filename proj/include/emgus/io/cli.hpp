#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emgus/core/errors.hpp"
#include "emgus/cosim/scenario.hpp"
#include "emgus/io/commands.hpp"
#include "emgus/io/scenario_json.hpp"

namespace emgus::io {

/// Process exit codes; a stable contract for scripts.
enum ExitCode : int { kExitOk = 0, kExitUserError = 2, kExitInternal = 3 };

namespace detail {

struct CommonFlags {
    std::string scenario;
    std::string preset;
    std::string out;
    std::optional<std::uint64_t> seed;
};

inline void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--scenario", f.scenario, "scenario JSON file");
    cmd->add_option("--preset", f.preset, "built-in scenario: three-contraction | periodic-200ms-1hz");
    cmd->add_option("--out", f.out, "output directory (default: run.output_dir)");
    cmd->add_option("--seed", f.seed, "master seed, overrides run.seed");
}

/// Scenario from --scenario or --preset (three-contraction when neither is given).
inline cosim::Scenario resolve_scenario(const CommonFlags& f) {
    if (!f.scenario.empty() && !f.preset.empty()) throw ParameterError("--scenario and --preset are mutually exclusive");
    cosim::Scenario s;
    if (!f.scenario.empty()) {
        s = load_scenario(f.scenario);
    } else {
        const std::string name = f.preset.empty() ? std::string(cosim::kPresetThreeContraction) : f.preset;
        auto p = cosim::preset(name);
        if (!p) throw ParameterError("unknown preset '" + name + "'");
        s = *p;
    }
    if (f.seed) s.run.seed = *f.seed;
    if (!f.out.empty()) s.run.output_dir = f.out;
    s.validate();
    return s;
}

}  // namespace detail

/// Prints the failure and maps it onto the exit-code contract.
inline int report_failure(std::exception_ptr failure, std::ostream& err) {
    try {
        std::rethrow_exception(failure);
    } catch (const ValidationError& e) {
        err << "error: invalid scenario\n";
        for (const auto& f : e.fields()) err << "  " << f << "\n";
        return kExitUserError;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const InvariantError& e) {
        err << "internal invariant violated: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (...) {
        err << "internal error: unknown exception\n";
        return kExitInternal;
    }
}

/// Parses argv-style arguments (without the program name) and runs one subcommand.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sEMG-triggered ultrasound duty-cycling simulator", "emgus"};
    app.require_subcommand(1);

    detail::CommonFlags synth_f, run_f, replay_f, sweep_f;
    auto* synth_cmd = app.add_subcommand("synth", "synthesize EMG, force and ground truth");
    detail::add_common(synth_cmd, synth_f);

    auto* run_cmd = app.add_subcommand("run", "full co-simulation with all artifacts");
    detail::add_common(run_cmd, run_f);

    auto* replay_cmd = app.add_subcommand("replay", "run the trigger chain over a recorded EMG CSV");
    detail::add_common(replay_cmd, replay_f);
    std::string replay_emg, replay_units = "volts", replay_truth;
    replay_cmd->add_option("--emg", replay_emg, "EMG CSV (t_s,value)")->required();
    replay_cmd->add_option("--units", replay_units, "sample units")->check(CLI::IsMember({"volts", "adc_code"}));
    replay_cmd->add_option("--truth", replay_truth, "ground_truth.json for latency statistics");

    auto* sweep_cmd = app.add_subcommand("sweep", "analytic and simulated duty-cycle sweep");
    detail::add_common(sweep_cmd, sweep_f);
    SweepRequest sweep_req;
    std::vector<double> sweep_duties;
    std::vector<double> sweep_rates;
    // CLI11 would otherwise read an empty value as 0.
    const CLI::Validator non_empty([](std::string& v) { return v.empty() ? std::string("empty grid value") : std::string(); },
                                   "VALUE");
    auto* duties_opt =
        sweep_cmd->add_option("--duties", sweep_duties, "duty grid, e.g. 0,0.2,0.5,1")->delimiter(',')->check(non_empty);
    auto* rates_opt =
        sweep_cmd->add_option("--rates", sweep_rates, "contraction rates in Hz")->delimiter(',')->check(non_empty);
    duties_opt->excludes(rates_opt);
    sweep_cmd->add_option("--contraction-s", sweep_req.contraction_s, "contraction length for --rates");
    sweep_cmd->add_option("--rate", sweep_req.rate_hz, "repetition rate for --duties grids (Hz)");
    sweep_cmd->add_option("--sim-duration", sweep_req.simulated_duration_s, "simulated seconds per grid point");
    sweep_cmd->add_flag("--simulate", sweep_req.simulate, "also co-simulate every grid point");

    auto* report_cmd = app.add_subcommand("report", "summarize a run directory");
    std::string report_dir;
    report_cmd->add_option("run_dir", report_dir, "directory written by 'run'")->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    }

    auto out_dir = [](const cosim::Scenario& s) { return std::filesystem::path(s.run.output_dir); };
    try {
        if (*synth_cmd) {
            const auto s = detail::resolve_scenario(synth_f);
            cmd_synth(s, out_dir(s), out);
        } else if (*run_cmd) {
            const auto s = detail::resolve_scenario(run_f);
            cmd_run(s, out_dir(s), out);
        } else if (*replay_cmd) {
            const auto s = detail::resolve_scenario(replay_f);
            ReplayOptions opt;
            opt.units = replay_units == "adc_code" ? SampleUnits::adc_code : SampleUnits::volts;
            if (!replay_truth.empty()) opt.truth = replay_truth;
            cmd_replay(replay_emg, s.pipeline, out_dir(s), opt, out);
        } else if (*sweep_cmd) {
            const auto s = detail::resolve_scenario(sweep_f);
            if (rates_opt->count() > 0) {
                sweep_req.rates_hz = sweep_rates;
            } else {
                sweep_req.duties = duties_opt->count() > 0 ? sweep_duties : energy::default_duty_grid();
            }
            cmd_sweep(s, sweep_req, out_dir(s), out);
        } else if (*report_cmd) {
            cmd_report(report_dir, out);
        }
    } catch (...) {
        return report_failure(std::current_exception(), err);
    }
    return kExitOk;
}

}  // namespace emgus::io
