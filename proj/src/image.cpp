#include "csm/image.hpp"

#include "csm/error.hpp"

namespace csm {

FaceImage::FaceImage(int width, int height, int channels, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1)
        throw ValidationError("image dimensions must be >= 1, got " + std::to_string(width) +
                              "x" + std::to_string(height));
    if (channels != 1 && channels != 3)
        throw ValidationError("channel count must be 1 or 3, got " + std::to_string(channels));
    const std::size_t expected =
        static_cast<std::size_t>(width) * height * channels;
    if (pixels_.size() != expected)
        throw ValidationError("pixel buffer size " + std::to_string(pixels_.size()) +
                              " does not match " + std::to_string(expected));
}

FaceImage FaceImage::filled(int width, int height, int channels, std::uint8_t value) {
    if (width < 1 || height < 1 || (channels != 1 && channels != 3))
        throw ValidationError("invalid image shape");
    return FaceImage(width, height, channels,
                     std::vector<std::uint8_t>(
                         static_cast<std::size_t>(width) * height * channels, value));
}

}  // namespace csm
