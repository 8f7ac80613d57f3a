#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace csm {

struct Point2 {
    float x = 0.0f;
    float y = 0.0f;
    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Shared pixel rounding rule for vertex coordinates (round half up).
inline int round_pixel(float v) { return static_cast<int>(std::llround(v)); }

/// 1:1 dense mapping of mesh-vertex projections between an input face and the
/// canonical face. Index n refers to the same facial feature in both frames.
/// Visible vertices must round to non-negative coordinates; the upper bound is
/// checked against concrete image dimensions via check_bounds().
class DenseCorrespondence {
public:
    DenseCorrespondence(std::vector<Point2> input_points,
                        std::vector<Point2> canonical_points,
                        std::vector<std::uint8_t> visible = {});

    std::size_t size() const noexcept { return input_points_.size(); }
    const Point2& input_point(std::size_t n) const { return input_points_[n]; }
    const Point2& canonical_point(std::size_t n) const { return canonical_points_[n]; }
    bool visible(std::size_t n) const { return visible_[n] != 0; }
    std::size_t visible_count() const;

    const std::vector<Point2>& input_points() const noexcept { return input_points_; }
    const std::vector<Point2>& canonical_points() const noexcept { return canonical_points_; }

private:
    std::vector<Point2> input_points_;
    std::vector<Point2> canonical_points_;
    std::vector<std::uint8_t> visible_;
};

/// Parses a .dcorr file: first non-comment line is the vertex count N, then N
/// rows "x_I y_I x_F y_F [v]". '#' starts a comment. stride > 1 keeps every
/// stride-th vertex (0, stride, 2*stride, ...), matching the vertex-subsampling
/// knob of the pipeline.
DenseCorrespondence load_correspondence(const std::filesystem::path& path, int stride = 1);

void save_correspondence(const DenseCorrespondence& corr, const std::filesystem::path& path);

/// Rejects the correspondence unless every visible vertex rounds into both
/// image bounds. Out-of-bounds vertices are an error, never clamped.
void check_bounds(const DenseCorrespondence& corr, int input_width, int input_height,
                  int canonical_width, int canonical_height);

}  // namespace csm
