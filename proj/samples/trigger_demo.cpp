// Synthesizes the 200 ms / 1 Hz protocol, runs the trigger chain and reports
// per-contraction latency and the resulting power draw.
#include <cstdio>

#include "emgus/cosim/latency.hpp"
#include "emgus/cosim/simulate.hpp"
#include "emgus/energy/power.hpp"

int main() {
    using namespace emgus;
    auto scenario = *cosim::preset(cosim::kPreset200ms1Hz);
    scenario.run.seed = 7;
    const auto run = cosim::simulate(scenario);
    const auto lat = cosim::measure_latency(run);

    for (std::size_t i = 0; i < lat.contractions.size() && i < 10; ++i) {
        const auto& c = lat.contractions[i];
        if (c.latency_s)
            std::printf("onset %6.2f s  trigger +%5.1f ms\n", c.onset_s, *c.latency_s * 1e3);
        else
            std::printf("onset %6.2f s  missed\n", c.onset_s);
    }
    const auto e = energy::integrate_energy(run.trace, run.duration_s, scenario.power, scenario.us_timing.wake_latency_s);
    std::printf("%zu activations, %zu frames, duty %.3f, %.2f mW, %.1f h\n", e.activations, run.frames.size(),
                e.effective_us_duty, e.avg_power_mw, e.battery_life_h);
}
