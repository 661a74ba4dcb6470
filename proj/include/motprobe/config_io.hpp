#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "motprobe/config.hpp"

namespace motprobe {

struct LoadedConfig {
    ExperimentConfig config;
    // "section.key" for every field that fell back to its default.
    std::vector<std::string> defaulted;
};

// Keys carry their units (detuning_MHz, radii_mm, ...). Unknown keys and
// wrongly typed values are config-parse errors; invariant violations are
// validation errors.
LoadedConfig config_from_json(std::string_view text);
LoadedConfig load_config(const std::filesystem::path& path);

// Canonical document in file units; parses back to the same config.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// SHA-256 of the canonical document, hex encoded.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace motprobe
