#pragma once

#include <cstdint>

#include "motprobe/cloud.hpp"
#include "motprobe/detectors.hpp"
#include "motprobe/dynamics.hpp"
#include "motprobe/physics.hpp"

namespace motprobe {

struct SamplingConfig {
    double interval_s = 0.1;
    double step_segment_s = 10.0;
    // Samples within this long after a switch are excluded from step levels.
    double step_settle_s = 3.0;
    double loading_duration_s = 5.0;
    double decay_duration_s = 20.0;
    double scan_half_span_um = 3250.0;
    int scan_points = 131;
    int camera_bit_depth = 0;

    void validate() const;
};

struct ExperimentConfig {
    LaserConfig laser;
    FiberSpec fiber;
    SpcmSpec spcm;
    PhotodiodeSpec photodiode;
    CloudModel cloud_template;
    RegimeParams regime;
    // Dispenser on: loads toward R * tau. R is calibrated so the steady-state
    // fiber signal adds 4e5 counts/s over the laser backgrounds.
    TrapDynamics loading{1.7775592366694462e8, 0.43, 0.0};
    // Dispenser off: lifetime of the trapped population, starting at ten
    // times the regime crossover.
    TrapDynamics decay{0.0, 9.4, 5.0e5};
    SamplingConfig sampling;
    std::uint64_t seed = 20090101;

    // Every default named for the reference experiment.
    static ExperimentConfig paper_default();

    void validate() const;
};

}  // namespace motprobe
