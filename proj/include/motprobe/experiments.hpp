#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "motprobe/config.hpp"
#include "motprobe/dynamics.hpp"
#include "motprobe/estimation.hpp"
#include "motprobe/timeseries.hpp"

namespace motprobe {

// Switching sequence of the fluorescence-coupling check.
struct StepsRun {
    Schedule schedule;
    ScheduleTrace trace;
    // Per-segment statistics of the recorded SPCM series, transient excluded.
    std::vector<SegmentLevel> levels;
    // Noise-free rate at the end of each segment.
    std::vector<double> expected_levels;
};

StepsRun run_steps(const ExperimentConfig& cfg, bool noise);

struct ScanRun {
    TimeSeries spcm;
    TimeSeries camera;
    FitResult spcm_fit;
    FitResult camera_fit;
};

ScanRun run_scan(const ExperimentConfig& cfg, bool noise);

struct TwoChannelRun {
    Schedule schedule;
    ScheduleTrace trace;
    FitResult photodiode_fit;
    FitResult spcm_fit;
};

// With background_subtract the fit offsets are held at the known detector
// backgrounds instead of being fitted.
TwoChannelRun run_loading(const ExperimentConfig& cfg, bool noise, bool background_subtract = false);
TwoChannelRun run_decay(const ExperimentConfig& cfg, bool noise, bool background_subtract = false);

// Loading and decay time constants seen by both channels.
nlohmann::json compare_channels(const ExperimentConfig& cfg, bool noise,
                                bool background_subtract = false);

struct ReportEntry {
    std::string name;
    std::string unit;
    double target = 0.0;
    double obtained = 0.0;
    // Allowed |obtained - target|.
    double tolerance = 0.0;
    // Informational rows are reported but not judged.
    bool checked = true;
    bool passed = true;
    std::string note;
};

std::vector<ReportEntry> paper_report(const ExperimentConfig& cfg);
nlohmann::json report_to_json(const std::vector<ReportEntry>& entries);

nlohmann::json fit_to_json(const FitResult& fit);

}  // namespace motprobe
