#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "csm/correspondence.hpp"
#include "csm/image.hpp"
#include "csm/rng.hpp"
#include "csm/saliency_map.hpp"

namespace fixtures {

/// Self-cleaning scratch directory under the system temp dir.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("csm_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter()++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

inline csm::FaceImage noise_image(int w, int h, int channels, std::uint64_t seed) {
    csm::Rng rng(seed);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * channels);
    for (auto& p : px) p = static_cast<std::uint8_t>(rng.next_u64() % 256);
    return csm::FaceImage(w, h, channels, std::move(px));
}

inline csm::FaceImage gradient_image(int w, int h, int channels = 1) {
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * channels);
    std::size_t i = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c, ++i)
                px[i] = static_cast<std::uint8_t>((x * 7 + y * 13 + c * 31) % 256);
    return csm::FaceImage(w, h, channels, std::move(px));
}

/// Regular vertex grid with margin, as both point lists (identity mapping).
inline std::vector<csm::Point2> grid_points(int w, int h, int step, int margin = 0) {
    std::vector<csm::Point2> pts;
    for (int y = margin; y < h - margin; y += step)
        for (int x = margin; x < w - margin; x += step)
            pts.push_back({static_cast<float>(x), static_cast<float>(y)});
    return pts;
}

inline csm::DenseCorrespondence identity_grid(int w, int h, int step, int margin = 0) {
    auto pts = grid_points(w, h, step, margin);
    return csm::DenseCorrespondence(pts, pts);
}

/// Grid correspondence with the input side offset by (dx, dy).
inline csm::DenseCorrespondence shifted_grid(int w, int h, int step, float dx, float dy,
                                             int margin = 0) {
    auto canon = grid_points(w, h, step, margin);
    auto input = canon;
    for (auto& p : input) {
        p.x += dx;
        p.y += dy;
    }
    return csm::DenseCorrespondence(input, canon);
}

inline csm::SaliencyMap random_map(int w, int h, csm::Frame frame, std::uint64_t seed,
                                   double lo = 0.0, double hi = 1.0) {
    csm::Rng rng(seed);
    std::vector<float> values(static_cast<std::size_t>(w) * h);
    for (auto& v : values) v = static_cast<float>(lo + (hi - lo) * rng.uniform());
    return csm::SaliencyMap(w, h, frame, std::move(values));
}

}  // namespace fixtures
