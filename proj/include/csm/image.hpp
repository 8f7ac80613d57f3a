#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace csm {

/// 8-bit raster image, 1 (grayscale) or 3 (RGB) channels, row-major storage.
/// Treated as immutable once constructed; pipeline operations return copies.
class FaceImage {
public:
    FaceImage(int width, int height, int channels, std::vector<std::uint8_t> pixels);

    static FaceImage filled(int width, int height, int channels, std::uint8_t value);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * height_;
    }

    std::uint8_t at(int x, int y, int c = 0) const { return pixels_[index(x, y, c)]; }
    std::uint8_t& at(int x, int y, int c = 0) { return pixels_[index(x, y, c)]; }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

    bool in_bounds(int x, int y) const noexcept {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    friend bool operator==(const FaceImage&, const FaceImage&) = default;

private:
    std::size_t index(int x, int y, int c) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }

    int width_;
    int height_;
    int channels_;
    std::vector<std::uint8_t> pixels_;
};

}  // namespace csm
