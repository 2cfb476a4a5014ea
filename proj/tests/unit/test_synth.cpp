#include <cmath>
#include <set>
#include <vector>

#include <catch_amalgamated.hpp>

#include "emgus/core/random.hpp"
#include "emgus/synth/emg.hpp"
#include "emgus/synth/mechanics.hpp"
#include "emgus/synth/protocol.hpp"
#include "gen.hpp"

using namespace emgus;
using namespace emgus::synth;

namespace {

double rms(const std::vector<double>& v, std::size_t from, std::size_t to) {
    long double s = 0;
    for (std::size_t i = from; i < to; ++i) s += static_cast<long double>(v[i]) * v[i];
    return std::sqrt(static_cast<double>(s / static_cast<long double>(to - from)));
}

}  // namespace

TEST_CASE("protocol arithmetic", "[synth]") {
    const auto p = ContractionProtocol::three_contraction();
    CHECK(p.total_duration_s() == 60.0);
    const auto c = p.contractions();
    REQUIRE(c.size() == 3);
    CHECK(c[0] == ContractionInterval{10.0, 20.0});
    CHECK(c[1] == ContractionInterval{30.0, 40.0});
    CHECK(c[2] == ContractionInterval{50.0, 60.0});
    CHECK(p.onsets_s() == std::vector<double>{10.0, 30.0, 50.0});

    const auto q = ContractionProtocol::contraction_200ms_1hz();
    CHECK_THAT(q.total_duration_s(), Catch::Matchers::WithinAbs(60.0, 1e-12));
    const auto qc = q.contractions();
    REQUIRE(qc.size() == 60);
    CHECK_THAT(qc[59].onset_s, Catch::Matchers::WithinAbs(59.8, 1e-9));

    // Adjacent contract segments merge, also across repetitions.
    ContractionProtocol m{{{SegmentState::contract, 1.0}, {SegmentState::contract, 2.0}, {SegmentState::rest, 1.0}}, 2};
    CHECK(m.contractions() == std::vector<ContractionInterval>{{0.0, 3.0}, {4.0, 7.0}});
    ContractionProtocol wrap{{{SegmentState::rest, 1.0}, {SegmentState::contract, 1.0}}, 3};
    CHECK(wrap.contractions().size() == 3);
    ContractionProtocol all{{{SegmentState::contract, 1.0}}, 5};
    CHECK(all.contractions() == std::vector<ContractionInterval>{{0.0, 5.0}});
}

TEST_CASE("protocol validation", "[synth]") {
    ContractionProtocol zero{{{SegmentState::rest, 0.0}}, 1};
    CHECK_THROWS_AS(zero.validate(), ValidationError);
    CHECK(ContractionProtocol{{}, 1}.problems().size() == 1);
    CHECK(ContractionProtocol{{{SegmentState::rest, 1.0}}, 0}.problems().size() == 1);
    CHECK(ContractionProtocol::three_contraction().problems().empty());
    CHECK_THROWS_AS(EmgGenerator(zero, EmgSynthConfig{}), ValidationError);
}

TEST_CASE("activation envelope", "[synth]") {
    const auto p = ContractionProtocol::three_contraction();
    CHECK(activation(5.0, p, 0.1) == 0.0);
    CHECK(activation(15.0, p, 0.1) == 1.0);
    CHECK_THAT(activation(10.05, p, 0.1), Catch::Matchers::WithinAbs(0.5, 1e-9));
    CHECK(activation(20.5, p, 0.1) == 0.0);
    CHECK(activation(10.0, p, 0.0) == 1.0);
    CHECK(activation(9.999, p, 0.0) == 0.0);
    gen::for_all(200, 51, [&](gen::Gen& g, std::size_t) {
        const double a = activation(g.uniform(0.0, 70.0), p, g.uniform(0.0, 2.0));
        CHECK((a >= 0.0 && a <= 1.0));
    });
}

TEST_CASE("silent configuration synthesizes zeros", "[synth]") {
    EmgSynthConfig cfg;
    cfg.burst_rms_v = 0.0;
    cfg.baseline_rms_v = 0.0;
    cfg.mains_amp_v = 0.0;
    const auto out = synth_emg(ContractionProtocol::three_contraction(), cfg);
    REQUIRE(out.signal.size() == 30000);
    for (double v : out.signal.values) REQUIRE(v == 0.0);
    CHECK(out.onsets_s == std::vector<double>{10.0, 30.0, 50.0});
}

TEST_CASE("plateau RMS dominates rest RMS", "[synth]") {
    const auto out = synth_emg(ContractionProtocol::three_contraction(), EmgSynthConfig{});
    const double plateau = rms(out.signal.values, 12 * 500, 19 * 500);
    const double rest = rms(out.signal.values, 2 * 500, 9 * 500);
    CHECK(plateau / rest >= 5.0);
}

TEST_CASE("contraction power exceeds rest power whenever the burst is larger", "[synth][property]") {
    gen::for_all(40, 52, [](gen::Gen& g, std::size_t) {
        EmgSynthConfig cfg;
        cfg.baseline_rms_v = g.uniform(0.0, 0.01);
        cfg.burst_rms_v = cfg.baseline_rms_v + g.uniform(0.005, 0.05);
        cfg.mains_amp_v = g.uniform(0.0, 0.005);
        cfg.seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30));
        ContractionProtocol p{{{SegmentState::rest, 2.0}, {SegmentState::contract, 2.0}}, 2};
        const auto out = synth_emg(p, cfg);
        CHECK(rms(out.signal.values, 1200, 2000) > rms(out.signal.values, 200, 1000));
    });
}

TEST_CASE("synthesis is reproducible per seed", "[synth]") {
    EmgSynthConfig cfg;
    cfg.seed = 99;
    const auto p = ContractionProtocol::contraction_200ms_1hz();
    const auto a = synth_emg(p, cfg);
    const auto b = synth_emg(p, cfg);
    CHECK(a.signal == b.signal);
    cfg.seed = 100;
    CHECK_FALSE(synth_emg(p, cfg).signal == a.signal);

    EmgGenerator gen_a(p, EmgSynthConfig{});
    const auto whole = synth_emg(p, EmgSynthConfig{}, 2.0);
    for (std::size_t i = 0; i < whole.signal.size(); ++i) CHECK(gen_a.next() == whole.signal.values[i]);
}

TEST_CASE("fascicle depth and force follow the delayed trapezoid", "[synth]") {
    const auto p = ContractionProtocol::three_contraction();
    const MuscleMechanics m;
    CHECK(fascicle_depth(5.0, p, m) == 22.0);
    CHECK(fascicle_depth(15.0, p, m) == 30.0);
    CHECK(fascicle_depth(10.0 + m.em_delay_s, p, m) == 22.0);
    CHECK(fascicle_depth(10.0 + m.em_delay_s + m.rise_time_s / 2.0, p, m) > 22.0);
    CHECK(fascicle_depth(25.0, p, m) == 22.0);
    CHECK(synth_force(5.0, p, m) == 0.0);
    CHECK(synth_force(15.0, p, m) == 1.0);
    CHECK(synth_force(10.0, p, m) == 0.0);
    CHECK(synth_force(10.0 + m.em_delay_s / 2.0, p, m) == 0.0);
    CHECK(m.physiological_delay());
    CHECK_FALSE(MuscleMechanics{0.2, 22, 30, 0.1}.physiological_delay());
    CHECK(MuscleMechanics{0.05, 30, 22, 0.1}.problems().size() == 1);
}

TEST_CASE("mechanical onset trails electrical onset by exactly the delay", "[synth][property]") {
    gen::for_all(200, 53, [](gen::Gen& g, std::size_t) {
        MuscleMechanics m{g.uniform(0.03, 0.1), 22.0, 30.0, g.uniform(0.01, 0.3)};
        const double onset = g.uniform(0.0, 50.0);
        const std::vector<ContractionInterval> iv{{onset, onset + g.uniform(0.5, 5.0)}};
        CHECK(mechanical_level(onset, iv, m) == 0.0);
        CHECK(mechanical_level(onset + m.em_delay_s, iv, m) == 0.0);
        CHECK(mechanical_level(onset + m.em_delay_s + 1e-6, iv, m) > 0.0);
        const double f = synth_force(g.uniform(0.0, 60.0), iv, m);
        CHECK((f >= 0.0 && f <= 1.0));
    });
}

TEST_CASE("seed derivation and gaussian source", "[synth]") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t master = 0; master < 50; ++master)
        for (std::uint64_t stream : {kStreamEmgBurst, kStreamEmgBaseline, kStreamUsFrame, kStreamUsFrame + 1})
            seeds.insert(derive_seed(master, stream));
    CHECK(seeds.size() == 200);

    GaussianSource a(7), b(7);
    long double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = a();
        REQUIRE(x == b());
        sum += x;
        sq += static_cast<long double>(x) * x;
    }
    const double mean = static_cast<double>(sum / n);
    const double var = static_cast<double>(sq / n) - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}
