#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace csm::cli {

/// Effective settings of a run. Populated from a config file (one
/// "key = value" per line, '#' comments), then CLI overrides, then the
/// CSM_ORACLE_URL environment fallback.
struct RunConfig {
    std::string oracle;      // local oracle spec, e.g. "mean:w=64,h=64,ch=1"
    std::string oracle_url;  // HTTP base URL; exactly one source must be set
    std::filesystem::path canonical_image;
    std::filesystem::path canonical_dcorr;
    int sz = 15;
    int fill = 0;
    int batch = 32;
    int stride = 1;
    std::filesystem::path manifest;
    std::filesystem::path out = "out";
    std::uint64_t seed = 0;
    int workers = 1;
    double timeout_s = 30.0;
    double s_fraction = 0.15;  // evaluation heatmap budget: s = fraction * pixel count

    void set(const std::string& key, const std::string& value);

    /// Enforces the invariants: sz >= 1, stride >= 1, fill in [0,255],
    /// batch >= 1, workers >= 1, exactly one oracle source.
    void validate() const;

    nlohmann::json echo() const;
};

RunConfig load_config(const std::filesystem::path& path);

}  // namespace csm::cli
