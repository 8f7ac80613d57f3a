#pragma once

#include <filesystem>
#include <span>

#include <nlohmann/json_fwd.hpp>

#include "csm/image.hpp"
#include "csm/saliency_map.hpp"

namespace csm::cli {

/// All artifact writes go through write-temp-then-rename so a crashed run
/// never leaves a half-written file behind.
void atomic_write(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

void write_saliency_artifact(const SaliencyMap& map, const std::filesystem::path& path);
void write_png_artifact(const FaceImage& image, const std::filesystem::path& path);
void write_json_artifact(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace csm::cli
