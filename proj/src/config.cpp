#include "motprobe/config.hpp"

#include <cmath>

#include "motprobe/error.hpp"

namespace motprobe {

void SamplingConfig::validate() const {
    const auto positive = [](double v, const char* what) {
        require(std::isfinite(v) && v > 0.0, ErrorKind::Validation,
                std::string("sampling.") + what + " must be > 0");
    };
    positive(interval_s, "interval_s");
    positive(step_segment_s, "step_segment_s");
    positive(loading_duration_s, "loading_duration_s");
    positive(decay_duration_s, "decay_duration_s");
    positive(scan_half_span_um, "scan_half_span_mm");
    require(std::isfinite(step_settle_s) && step_settle_s >= 0.0 &&
                step_settle_s < step_segment_s,
            ErrorKind::Validation, "sampling.step_settle_s must be in [0, step_segment_s)");
    require(scan_points >= 5, ErrorKind::Validation, "sampling.scan_points must be >= 5");
    require(camera_bit_depth >= 0 && camera_bit_depth <= 32, ErrorKind::Validation,
            "sampling.camera_bit_depth must be in [0, 32]");
}

ExperimentConfig ExperimentConfig::paper_default() {
    return ExperimentConfig{};
}

void ExperimentConfig::validate() const {
    laser.validate();
    fiber.validate();
    spcm.validate();
    photodiode.validate();
    cloud_template.validate();
    regime.validate();
    loading.validate();
    decay.validate();
    sampling.validate();
}

}  // namespace motprobe
