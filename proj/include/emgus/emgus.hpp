#pragma once

// Umbrella header: the whole library in one include.

#include "emgus/core/errors.hpp"
#include "emgus/core/random.hpp"
#include "emgus/core/timed_series.hpp"

#include "emgus/dsp/adc.hpp"
#include "emgus/dsp/biquad.hpp"
#include "emgus/dsp/envelope.hpp"
#include "emgus/dsp/filter_design.hpp"
#include "emgus/dsp/pipeline.hpp"
#include "emgus/dsp/trigger.hpp"

#include "emgus/synth/emg.hpp"
#include "emgus/synth/mechanics.hpp"
#include "emgus/synth/protocol.hpp"
#include "emgus/synth/ultrasound.hpp"

#include "emgus/energy/power.hpp"

#include "emgus/cosim/latency.hpp"
#include "emgus/cosim/mmode.hpp"
#include "emgus/cosim/scenario.hpp"
#include "emgus/cosim/simulate.hpp"
#include "emgus/cosim/us_subsystem.hpp"

#include "emgus/io/commands.hpp"
#include "emgus/io/format.hpp"
#include "emgus/io/scenario_json.hpp"
#include "emgus/io/signal_file.hpp"
