#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <catch_amalgamated.hpp>

#include "emgus/cosim/latency.hpp"
#include "emgus/cosim/mmode.hpp"
#include "emgus/cosim/simulate.hpp"
#include "emgus/cosim/us_subsystem.hpp"
#include "emgus/energy/power.hpp"
#include "gen.hpp"

using namespace emgus;
using namespace emgus::cosim;
using dsp::EdgeKind;

namespace {

double effective_duty(const SimulationResult& r, const Scenario& s) {
    return energy::integrate_energy(r.trace, r.duration_s, s.power, s.us_timing.wake_latency_s).effective_us_duty;
}

// Short protocol with a strong burst: plateau envelope well above threshold.
Scenario strong_scenario(double em_delay_s) {
    Scenario s;
    s.protocol = {{{synth::SegmentState::rest, 1.5}, {synth::SegmentState::contract, 1.0}}, 8};
    s.emg.burst_rms_v = 0.06;
    s.mechanics.em_delay_s = em_delay_s;
    return s;
}

}  // namespace

TEST_CASE("three-contraction protocol: three activations at half duty, frames only when asserted", "[cosim]") {
    const Scenario s = *preset(kPresetThreeContraction);
    const auto r = simulate(s);
    CHECK(r.trace.rising_count() == 3);
    CHECK(r.trace.well_formed());
    const double duty = effective_duty(r, s);
    CHECK((duty >= 0.45 && duty <= 0.55));
    CHECK(frame_invariant_violations(r).empty());
    CHECK(r.raw.size() == 30000);
    CHECK(r.force.size() == 30000);
    CHECK(r.truth.onsets_s == std::vector<double>{10.0, 30.0, 50.0});
}

TEST_CASE("no burst, no trigger, no frames", "[cosim]") {
    Scenario s;
    s.emg.burst_rms_v = 0.0;
    const auto r = simulate(s);
    CHECK(r.trace.edges.empty());
    CHECK(r.frames.empty());
}

TEST_CASE("200 ms at 1 Hz: sixty activations near 20 % duty", "[cosim]") {
    const Scenario s = *preset(kPreset200ms1Hz);
    const auto r = simulate(s);
    CHECK(r.trace.rising_count() == 60);
    CHECK(effective_duty(r, s) == Catch::Approx(0.2).margin(0.03));
    const auto lat = measure_latency(r);
    CHECK(lat.matched == 60);
    CHECK(lat.spurious == 0);
    CHECK(lat.retriggers == 0);
}

TEST_CASE("simulation is bit-deterministic", "[cosim]") {
    Scenario s = *preset(kPreset200ms1Hz);
    s.run.seed = 1234;
    const auto a = simulate(s);
    const auto b = simulate(s);
    CHECK(a.raw == b.raw);
    CHECK(a.envelope == b.envelope);
    CHECK(a.trace == b.trace);
    CHECK(a.frames == b.frames);
    s.run.seed = 1235;
    CHECK_FALSE(simulate(s).raw == a.raw);
}

TEST_CASE("triggers never precede the onset they answer", "[cosim][property]") {
    gen::for_all(12, 71, [](gen::Gen& g, std::size_t) {
        Scenario s;
        s.protocol = {{{synth::SegmentState::rest, g.uniform(0.9, 2.0)}, {synth::SegmentState::contract, g.uniform(0.2, 1.5)}},
                      static_cast<int>(g.integer(3, 8))};
        s.emg.burst_rms_v = g.uniform(0.012, 0.08);
        s.run.seed = static_cast<std::uint64_t>(g.integer(1, 1 << 20));
        const auto r = simulate(s);
        const auto lat = measure_latency(r);
        for (const auto& c : lat.contractions)
            if (c.rising_s) CHECK(*c.rising_s > c.onset_s);
        const auto rising = r.trace.rising_times();
        if (!rising.empty()) CHECK(rising.front() > r.truth.contractions.front().onset_s);
        CHECK(frame_invariant_violations(r).empty());
    });
}

TEST_CASE("with hysteresis every contraction yields exactly one activation", "[cosim][property]") {
    gen::for_all(12, 73, [](gen::Gen& g, std::size_t) {
        Scenario s;
        s.protocol = {{{synth::SegmentState::rest, g.uniform(0.9, 2.0)}, {synth::SegmentState::contract, g.uniform(0.2, 1.5)}},
                      static_cast<int>(g.integer(3, 8))};
        s.emg.burst_rms_v = g.uniform(0.012, 0.08);
        s.pipeline.comparator.hysteresis_ratio = 0.5;
        s.pipeline.comparator.min_hold_s = 0.05;
        s.run.seed = static_cast<std::uint64_t>(g.integer(1, 1 << 20));
        const auto lat = measure_latency(simulate(s));
        CHECK(lat.spurious == 0);
        CHECK(lat.retriggers == 0);
        CHECK(lat.missed == 0);
    });
}

TEST_CASE("frame counts and spacing per activation", "[cosim][property]") {
    gen::for_all(6, 72, [](gen::Gen& g, std::size_t) {
        Scenario s = strong_scenario(0.05);
        s.us_timing.frame_period_s = g.uniform(0.005, 0.05);
        s.us_timing.wake_latency_s = g.uniform(0.0, 0.01);
        s.run.seed = static_cast<std::uint64_t>(g.integer(1, 1000));
        const auto r = simulate(s);
        const auto iv = r.trace.asserted_intervals(r.duration_s);
        const auto counts = frames_per_activation(r);
        REQUIRE(counts.size() == iv.size());
        std::size_t total = 0;
        for (std::size_t k = 0; k < iv.size(); ++k) {
            const double expected = std::floor((iv[k].end_s - iv[k].begin_s - s.us_timing.wake_latency_s) / s.us_timing.frame_period_s);
            CHECK(std::abs(static_cast<double>(counts[k]) - expected) <= 1.0);
            total += counts[k];
        }
        CHECK(total == r.frames.size());
        const SimTime period = to_sim_time(s.us_timing.frame_period_s);
        const SimTime wake = to_sim_time(s.us_timing.wake_latency_s);
        std::size_t i = 0;
        for (const auto& interval : iv) {
            std::optional<SimTime> prev;
            for (; i < r.frames.size() && r.frames.frames[i].t_s <= interval.end_s; ++i) {
                const SimTime t = to_sim_time(r.frames.frames[i].t_s);
                if (prev) CHECK(t - *prev == period);
                else CHECK(t - to_sim_time(interval.begin_s) >= wake);
                prev = t;
            }
        }
    });
}

TEST_CASE("first frame before motion", "[cosim]") {
    SECTION("a one-second wake-up is always too late") {
        Scenario s = *preset(kPresetThreeContraction);
        s.us_timing.wake_latency_s = 1.0;
        const auto r = simulate(s);
        const auto ok = first_frame_before_motion(r);
        REQUIRE(ok.size() == 3);
        CHECK(std::none_of(ok.begin(), ok.end(), [](bool b) { return b; }));
    }
    SECTION("a fast trigger beats a 100 ms delay") {
        const auto s = strong_scenario(0.1);
        const auto r = simulate(s);
        const auto lat = measure_latency(r);
        REQUIRE(lat.max_s);
        CHECK(*lat.max_s <= 0.05);
        const auto ok = first_frame_before_motion(r);
        CHECK(std::all_of(ok.begin(), ok.end(), [](bool b) { return b; }));
    }
    SECTION("hand-built timelines") {
        const std::vector<double> onsets{1.0, 3.0};
        CHECK(first_frame_before_motion(std::vector<double>{1.02, 1.04, 3.06}, onsets, 0.05) == std::vector<bool>{true, false});
        CHECK(first_frame_before_motion(std::vector<double>{}, onsets, 0.05) == std::vector<bool>{false, false});
        CHECK(first_frame_before_motion(std::vector<double>{1.05, 3.05}, onsets, 0.05) == std::vector<bool>{true, true});
    }
}

TEST_CASE("latency matching", "[cosim]") {
    const std::vector<double> onsets{1.0, 3.0, 5.0};
    SECTION("edge exactly at onset has zero latency") {
        dsp::TriggerTrace t{{{1.0, EdgeKind::rising}, {1.5, EdgeKind::falling}}};
        const auto rep = measure_latency(t, onsets, 0.05);
        CHECK(rep.contractions[0].latency_s == 0.0);
        CHECK(rep.contractions[0].margin_s == 0.05);
        CHECK(rep.matched == 1);
        CHECK(rep.missed == 2);
    }
    SECTION("no edges") {
        const auto rep = measure_latency(dsp::TriggerTrace{}, onsets, 0.05);
        CHECK(rep.matched == 0);
        CHECK(rep.missed == 3);
        CHECK(rep.spurious == 0);
        CHECK_FALSE(rep.max_s);
        CHECK_FALSE(rep.mean_s);
        CHECK_FALSE(rep.worst_margin_s());
    }
    SECTION("spurious and repeated edges are counted, not thrown") {
        dsp::TriggerTrace t{{{0.5, EdgeKind::rising},
                             {0.6, EdgeKind::falling},
                             {1.02, EdgeKind::rising},
                             {1.5, EdgeKind::falling},
                             {1.7, EdgeKind::rising},
                             {1.8, EdgeKind::falling},
                             {3.03, EdgeKind::rising},
                             {3.5, EdgeKind::falling},
                             {4.5, EdgeKind::rising}}};
        const auto rep = measure_latency(t, onsets, 0.05);
        CHECK(rep.spurious == 2);  // before any onset; more than 1 s after 3.0
        CHECK(rep.retriggers == 1);
        CHECK(rep.matched == 2);
        CHECK_THAT(*rep.max_s, Catch::Matchers::WithinAbs(0.03, 1e-12));
        CHECK_THAT(*rep.mean_s, Catch::Matchers::WithinAbs(0.025, 1e-12));
        CHECK_THAT(*rep.worst_margin_s(), Catch::Matchers::WithinAbs(0.02, 1e-12));
    }
}

TEST_CASE("ultrasound state machine", "[cosim]") {
    UsTiming timing;
    timing.wake_latency_s = 0.001;
    timing.frame_period_s = 0.02;
    UsSubsystem us(timing);
    std::vector<SimTime> frames;
    auto record = [&](SimTime t) { frames.push_back(t); };
    us.advance_until(to_sim_time(1.0), record);
    CHECK(us.state() == UsState::sleep);
    CHECK(frames.empty());

    us.on_trigger(true, to_sim_time(1.0));
    CHECK(us.state() == UsState::waking);
    us.advance_until(to_sim_time(1.001), record);  // wake completes exactly here: not yet
    CHECK(frames.empty());
    us.advance_until(to_sim_time(1.1), record);
    CHECK(us.state() == UsState::acquiring);
    CHECK(frames == std::vector<SimTime>{to_sim_time(1.001), to_sim_time(1.021), to_sim_time(1.041), to_sim_time(1.061), to_sim_time(1.081)});
    us.on_trigger(true, to_sim_time(1.1));  // already awake: no restart
    us.on_trigger(false, to_sim_time(1.101));
    CHECK(us.state() == UsState::sleep);
    us.advance_until(to_sim_time(5.0), record);
    CHECK(frames.size() == 5);
    CHECK(to_string(UsState::waking) == "waking");
    CHECK_THROWS_AS(UsSubsystem(UsTiming{0.0, 0.0, false}), ParameterError);
}

TEST_CASE("forced acquisition and M-mode tracking", "[cosim]") {
    Scenario s = *preset(kPresetThreeContraction);
    s.us_timing.force_continuous = true;
    s.run.duration_s = 22.0;
    const auto r = simulate(s);
    CHECK(r.frames.size() == 1100);
    const auto img = build_mmode(r.frames);
    CHECK(img.rows == r.frames.size());
    CHECK(img.cols == 400);
    CHECK_THAT(img.depth_mm(1), Catch::Matchers::WithinRel(1540.0 / (2.0 * 8e6) * 1000.0, 1e-12));

    const double min_depth = 12.0;  // below the static scatterers
    double plateau_err = 0.0;
    std::size_t plateau_n = 0;
    for (std::size_t i = 0; i < img.rows; ++i) {
        const double t = img.time_s[i];
        const double est = img.brightest_depth_mm(i, min_depth);
        if (t > 2.0 && t < 9.0) CHECK(std::abs(est - 22.0) <= 1.0);
        if (t > 11.0 && t < 19.0) {
            CHECK(std::abs(est - 30.0) <= 1.0);
            plateau_err += est - r.frames.frames[i].true_depth_mm;
            ++plateau_n;
        }
    }
    REQUIRE(plateau_n > 0);
    CHECK(std::abs(plateau_err / static_cast<double>(plateau_n)) < 1.0);

    UsFrameSet one{r.frames.config, {r.frames.frames.front()}};
    CHECK(build_mmode(one).rows == 1);
    CHECK_THROWS_AS(build_mmode(UsFrameSet{}), ParameterError);
}

TEST_CASE("scenario validation lists offending fields", "[cosim]") {
    Scenario s;
    s.pipeline.sample_rate_hz = 1000.0;
    s.us_timing.frame_period_s = 0.0;
    s.mechanics.depth_contracted_mm = 10.0;
    try {
        s.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.fields().size() == 3);
    }
    Scenario deep;
    deep.mechanics.depth_contracted_mm = 45.0;
    CHECK(deep.problems().size() == 1);
    CHECK_THROWS_AS(simulate(deep), ValidationError);
    CHECK(preset_names().size() == 2);
    CHECK_FALSE(preset("nope"));
}

TEST_CASE("frame invariant checker flags frames outside assertions", "[cosim]") {
    SimulationResult r;
    r.duration_s = 10.0;
    r.trace.edges = {{1.0, EdgeKind::rising}, {2.0, EdgeKind::falling}};
    r.us_timing.wake_latency_s = 0.001;
    r.frames.frames = {{1.001, 22.0, {}}, {1.5, 22.0, {}}, {2.0, 22.0, {}}};
    CHECK(frame_invariant_violations(r).empty());
    r.frames.frames.push_back({2.5, 22.0, {}});
    CHECK(frame_invariant_violations(r).size() == 1);
    r.frames.frames = {{1.0005, 22.0, {}}};
    CHECK(frame_invariant_violations(r).size() == 1);
}
