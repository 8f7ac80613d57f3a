#pragma once

#include <cstdint>
#include <vector>

#include "csm/correspondence.hpp"
#include "csm/image.hpp"
#include "csm/oracle.hpp"

namespace csm {

struct OcclusionSpec {
    int sz = 15;            // patch side length in input-image pixels
    std::uint8_t fill = 0;  // intensity written into the occluded square
    int batch = 32;         // oracle batch size
};

struct VertexDrop {
    std::size_t index;  // vertex index into the correspondence
    double drop;        // phi(I,c) - phi(occluded,c)
};

/// Half-open pixel window of a size-sz patch centered at (cx, cy), clipped to
/// the image: [x0, x1) x [y0, y1). The window spans exactly sz pixels per axis
/// before clipping; for even sz the extra pixel falls on the low side.
struct PatchBounds {
    int x0, y0, x1, y1;
    bool contains(int x, int y) const noexcept {
        return x >= x0 && x < x1 && y >= y0 && y < y1;
    }
};
PatchBounds patch_bounds(int cx, int cy, int sz, int width, int height);

/// Copy of the image with the patch around `center` set to spec.fill. Pixels
/// outside the (clipped) square are untouched.
FaceImage occlude(const FaceImage& image, Point2 center, const OcclusionSpec& spec);

/// One confidence drop per visible vertex. The base confidence is scored
/// exactly once; occluded variants are scored in batches of spec.batch,
/// optionally across `workers` threads. Results are assigned by vertex index,
/// so the output is independent of batch size and worker count.
std::vector<VertexDrop> vertex_drops(const FaceImage& image, const DenseCorrespondence& corr,
                                     const ConfidenceOracle& oracle, int class_id,
                                     const OcclusionSpec& spec, int workers = 1);

}  // namespace csm
