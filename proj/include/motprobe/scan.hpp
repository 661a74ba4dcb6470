#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "motprobe/cloud.hpp"
#include "motprobe/detectors.hpp"
#include "motprobe/physics.hpp"
#include "motprobe/timeseries.hpp"

namespace motprobe {

enum class Axis { X, Y };

// Cloud translated along x across the fiber. Each offset reports
// background (dark + repump + cooling) plus the fiber-coupled fluorescence
// in counts/s. Position i draws from rng.split(i); with noise off the
// expected rate is reported. Positions are reported in mm.
TimeSeries simulate_scan(const CloudModel& cloud, const FiberSpec& fiber, const LaserConfig& laser,
                         const SpcmSpec& spcm, std::span<const double> positions_um,
                         std::uint64_t seed, bool noise = true);

// Column density along the viewing direction (y for Axis::X, x for Axis::Y)
// through the cloud center plane z = center.z, normalized to peak 1.
// bit_depth > 0 quantizes the profile to 2^bit_depth - 1 levels, as in a
// frame grabbed from a camera.
TimeSeries camera_cross_section(const CloudModel& cloud, Axis axis,
                                std::span<const double> positions_um, int bit_depth = 0);

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace motprobe
