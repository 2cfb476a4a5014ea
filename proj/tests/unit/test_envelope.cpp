#include <cmath>
#include <limits>
#include <vector>

#include <catch_amalgamated.hpp>

#include "emgus/dsp/envelope.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace emgus;
using dsp::WaveformLength;

namespace {

std::vector<double> run(WaveformLength& wl, const std::vector<double>& x) {
    std::vector<double> out;
    out.reserve(x.size());
    for (double v : x) out.push_back(wl.push(v));
    return out;
}

bool within_rel(double got, double want, double rel) {
    return std::abs(got - want) <= rel * std::max(std::abs(want), std::numeric_limits<double>::min());
}

}  // namespace

TEST_CASE("constant input has zero waveform length", "[envelope]") {
    WaveformLength wl;
    for (int i = 0; i < 60; ++i) CHECK(wl.push(0.5) == 0.0);
}

TEST_CASE("alternating +a/-a over a full window gives 2a(window-1)", "[envelope]") {
    const double a = 0.3;
    WaveformLength wl(60);
    double v = 0.0;
    for (int i = 0; i < 60; ++i) v = wl.push(i % 2 == 0 ? a : -a);
    CHECK_THAT(v, Catch::Matchers::WithinRel(2.0 * a * 59.0, 1e-12));
    // Stays there once the window is full.
    for (int i = 60; i < 200; ++i) v = wl.push(i % 2 == 0 ? a : -a);
    CHECK_THAT(v, Catch::Matchers::WithinRel(2.0 * a * 59.0, 1e-12));
}

TEST_CASE("warm-up pads history with the first sample", "[envelope]") {
    WaveformLength wl(4);
    CHECK(wl.push(5.0) == 0.0);
    CHECK(wl.push(6.0) == 1.0);
    CHECK(wl.push(4.0) == 3.0);
    CHECK(wl.push(4.0) == 3.0);
    CHECK(wl.push(4.0) == 2.0);  // |6-5| has left the window
    CHECK(wl.push(4.0) == 0.0);
}

TEST_CASE("incremental waveform length equals brute force on 10,000 random streams", "[envelope][property]") {
    std::size_t failures = 0;
    gen::for_all(10000, 21, [&](gen::Gen& g, std::size_t i) {
        const auto window = static_cast<std::size_t>(g.integer(2, 120));
        const auto n = static_cast<std::size_t>(g.integer(1, 600));
        const auto x = i % 4 == 3 ? g.adversarial_stream(n) : g.uniform_stream(n, -g.uniform(0.0, 10.0), g.uniform(0.0, 10.0));
        WaveformLength wl(window);
        for (std::size_t k = 0; k < n; ++k) {
            const double got = wl.push(x[k]);
            const double want = oracle::waveform_length(x, k, window);
            if (got < 0.0 || !within_rel(got, want, 1e-12)) {
                ++failures;
                FAIL_CHECK("window " << window << " sample " << k << ": " << got << " vs " << want);
                return;
            }
        }
    });
    CHECK(failures == 0);
}

TEST_CASE("dc offset leaves the envelope unchanged", "[envelope][property]") {
    gen::for_all(500, 22, [](gen::Gen& g, std::size_t) {
        // Dyadic inputs keep every subtraction exact, so invariance is bitwise.
        const auto n = static_cast<std::size_t>(g.integer(1, 300));
        std::vector<double> x(n), y(n);
        const double offset = g.dyadic(8, 1 << 12);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = g.dyadic(10, 1 << 14);
            y[k] = x[k] + offset;
        }
        WaveformLength a(60), b(60);
        CHECK(run(a, x) == run(b, y));
    });
    gen::for_all(500, 23, [](gen::Gen& g, std::size_t) {
        const auto x = g.uniform_stream(200, -1.0, 1.0);
        const double offset = g.uniform(-10.0, 10.0);
        std::vector<double> y(x);
        for (auto& v : y) v += offset;
        WaveformLength a(60), b(60);
        const auto ra = run(a, x);
        const auto rb = run(b, y);
        for (std::size_t k = 0; k < ra.size(); ++k) CHECK(std::abs(ra[k] - rb[k]) <= 1e-12 * std::abs(offset) * 60.0 + 1e-12 * ra[k]);
    });
}

TEST_CASE("scaling the input scales the envelope", "[envelope][property]") {
    gen::for_all(500, 24, [](gen::Gen& g, std::size_t) {
        const auto x = g.uniform_stream(static_cast<std::size_t>(g.integer(1, 300)), -1.0, 1.0);
        const double k2 = std::ldexp(1.0, static_cast<int>(g.integer(-20, 20)));
        const double k = g.uniform(0.0, 100.0);
        std::vector<double> y2(x), yk(x);
        for (auto& v : y2) v *= k2;
        for (auto& v : yk) v *= k;
        WaveformLength a(60), b(60), c(60);
        const auto ra = run(a, x);
        const auto r2 = run(b, y2);
        const auto rk = run(c, yk);
        for (std::size_t i = 0; i < ra.size(); ++i) {
            CHECK(r2[i] == ra[i] * k2);  // power-of-two scaling is exact
            CHECK(within_rel(rk[i], ra[i] * k, 1e-12));
        }
    });
    WaveformLength z(60);
    for (int i = 0; i < 100; ++i) CHECK(z.push(0.0 * std::sin(i)) == 0.0);
}

TEST_CASE("envelope rejects bad windows and non-finite samples", "[envelope]") {
    CHECK_THROWS_AS(WaveformLength(1), ParameterError);
    CHECK_THROWS_AS(WaveformLength(0), ParameterError);
    WaveformLength wl;
    wl.push(1.0);
    CHECK_THROWS_AS(wl.push(std::nan("")), ParameterError);
    CHECK_THROWS_AS(wl.push(-std::numeric_limits<double>::infinity()), ParameterError);
    CHECK(wl.push(1.0) == 0.0);
}

TEST_CASE("reset restores the initial state", "[envelope]") {
    WaveformLength a(10), b(10);
    gen::Gen g(25);
    for (int i = 0; i < 50; ++i) a.push(g.uniform(-1.0, 1.0));
    a.reset();
    CHECK_FALSE(a.primed());
    const auto x = g.uniform_stream(40, -1.0, 1.0);
    CHECK(run(a, x) == run(b, x));
}
