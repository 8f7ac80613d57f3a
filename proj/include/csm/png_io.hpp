#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "csm/image.hpp"
#include "csm/saliency_map.hpp"

namespace csm {

/// PNG codec for 8-bit grayscale / RGB images. 16-bit, palette and alpha
/// inputs are converted down on read.
FaceImage decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const FaceImage& image);

FaceImage read_png(const std::filesystem::path& path);
void write_png(const FaceImage& image, const std::filesystem::path& path);

/// Fixed heatmap ramp: t=0 blue, then cyan, yellow, t=1 red.
std::array<std::uint8_t, 3> ramp_color(double t);

/// Renders min->blue, max->red; a constant map renders all blue.
FaceImage render_heatmap(const SaliencyMap& map);
void write_heatmap_png(const SaliencyMap& map, const std::filesystem::path& path);

/// Alpha-blends the rendered heatmap over a base image of the same size.
FaceImage overlay_heatmap(const SaliencyMap& map, const FaceImage& base, double alpha = 0.5);

}  // namespace csm
