#include "motprobe/manifest.hpp"

#include <array>
#include <chrono>
#include <ctime>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "motprobe/config_io.hpp"
#include "motprobe/error.hpp"

namespace motprobe {

using nlohmann::json;

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        fail(ErrorKind::Io, "SHA-256 digest failed");
    }
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", tm.tm_year + 1900,
                       tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
}

json run_manifest(std::string_view command, const ExperimentConfig& cfg, bool noise,
                  const std::vector<EmittedFile>& files, const json& summary) {
    json emitted = json::array();
    for (const auto& f : files) {
        emitted.push_back({{"name", f.name}, {"rows", f.rows}, {"sha256", f.sha256}});
    }
    return json{
        {"artifact", "motprobe"},
        {"artifact_version", std::string(kArtifactVersion)},
        {"command", std::string(command)},
        {"config_hash", config_hash(cfg)},
        {"seed", cfg.seed},
        {"noise", noise},
        {"generated_at", utc_timestamp()},
        {"files", emitted},
        {"summary", summary},
        {"config", config_to_json(cfg)},
    };
}

}  // namespace motprobe
