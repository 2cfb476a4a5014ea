// Prints the magnitude response of the default trigger filters.
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "emgus/dsp/pipeline.hpp"

int main() {
    const emgus::dsp::PipelineConfig cfg;
    const auto chain = cfg.make_filters();
    std::printf("%10s %12s %10s\n", "f_hz", "|H|", "dB");
    for (double f : {1.0, 10.0, 20.0, 35.0, 50.0, 51.0, 75.0, 100.0, 130.0, 200.0, 249.0}) {
        const double mag = std::abs(chain.response(f, cfg.sample_rate_hz));
        std::printf("%10.1f %12.6f %10.2f\n", f, mag, 20.0 * std::log10(std::max(mag, 1e-300)));
    }
}
