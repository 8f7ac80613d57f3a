#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace csm {

enum class Frame : std::uint8_t { canonical = 0, image = 1 };

/// Advisory provenance carried alongside a map in memory. Not part of the
/// .csm file format; runs echo it through config_echo.json instead.
struct MapMeta {
    int occlusion_sz = 0;
    int stride = 0;
    std::string oracle_id;
    std::string confidence_kind;  // "probability" or "raw"
};

/// Single-channel float heatmap in canonical or image coordinates.
/// All values are finite by construction.
class SaliencyMap {
public:
    SaliencyMap(int width, int height, Frame frame, std::vector<float> values,
                MapMeta meta = {});

    static SaliencyMap zeros(int width, int height, Frame frame, MapMeta meta = {});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    Frame frame() const noexcept { return frame_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * height_;
    }

    float at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }
    std::span<const float> values() const noexcept { return values_; }

    const MapMeta& meta() const noexcept { return meta_; }
    void set_meta(MapMeta meta) { meta_ = std::move(meta); }

    /// Equality over the serialized fields (shape, frame, bit-exact values).
    friend bool operator==(const SaliencyMap& a, const SaliencyMap& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.frame_ == b.frame_ &&
               a.values_ == b.values_;
    }

private:
    int width_;
    int height_;
    Frame frame_;
    std::vector<float> values_;
    MapMeta meta_;
};

/// Per-pixel contribution counts accompanying a canonical accumulation.
class CountMatrix {
public:
    CountMatrix(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::uint32_t at(int x, int y) const {
        return counts_[static_cast<std::size_t>(y) * width_ + x];
    }
    std::uint32_t& at(int x, int y) { return counts_[static_cast<std::size_t>(y) * width_ + x]; }
    std::span<const std::uint32_t> counts() const noexcept { return counts_; }

private:
    int width_;
    int height_;
    std::vector<std::uint32_t> counts_;
};

/// .csm binary layout: magic "CSM1", uint32 LE width, uint32 LE height,
/// uint8 frame, 3 reserved zero bytes, then width*height float32 LE values
/// row-major. Round-trips are bit-exact.
std::vector<std::uint8_t> serialize_saliency(const SaliencyMap& map);
SaliencyMap parse_saliency(std::span<const std::uint8_t> bytes);

void write_saliency(const SaliencyMap& map, const std::filesystem::path& path);
SaliencyMap read_saliency(const std::filesystem::path& path);

}  // namespace csm
