#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "motprobe/config.hpp"

namespace motprobe {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

std::string sha256_hex(std::string_view data);

std::string utc_timestamp();

struct EmittedFile {
    std::string name;
    std::size_t rows = 0;
    std::string sha256;
};

// Run record written next to the emitted series. generated_at is the only
// field that differs between identical runs.
nlohmann::json run_manifest(std::string_view command, const ExperimentConfig& cfg, bool noise,
                            const std::vector<EmittedFile>& files,
                            const nlohmann::json& summary = nlohmann::json::object());

}  // namespace motprobe
