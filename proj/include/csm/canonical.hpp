#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "csm/correspondence.hpp"
#include "csm/occlusion.hpp"
#include "csm/saliency_map.hpp"

namespace csm {

/// Occlusion patch size transported to the canonical frame:
/// round-half-up of sz * H_F / H_I, never below 1.
int canonical_patch_size(int sz, int input_height, int canonical_height);

/// Accumulates per-vertex drops into a canonical grid with per-pixel counts.
/// finalize() divides elementwise by the counts, leaving exact zeros where no
/// vertex contributed. Accumulation happens in double precision.
class CanonicalAccumulator {
public:
    CanonicalAccumulator(int width, int height, int patch_sz);

    /// Adds `value` to every grid cell of the patch around (cx, cy) and
    /// increments the matching counts.
    void splat(double value, int cx, int cy);

    SaliencyMap finalize(Frame frame, MapMeta meta = {}) const;
    const CountMatrix& counts() const noexcept { return counts_; }
    int patch_sz() const noexcept { return patch_sz_; }

private:
    int width_, height_, patch_sz_;
    std::vector<double> sums_;
    CountMatrix counts_;
};

/// Canonical Image Saliency map: occludes the input image at every visible
/// vertex, measures the confidence drop, and splats each drop onto the
/// canonical frame around the corresponding canonical vertex, followed by
/// density normalization.
SaliencyMap compute_cis(const FaceImage& image, const DenseCorrespondence& corr,
                        int canonical_width, int canonical_height, const ConfidenceOracle& oracle,
                        int class_id, const OcclusionSpec& spec, int workers = 1);

/// Canonical Model Saliency map: elementwise arithmetic mean of CIS maps.
/// All maps must be canonical-frame and share one shape.
SaliencyMap compute_cms(std::span<const SaliencyMap> maps);

struct ConvergencePoint {
    std::size_t k;
    double l1_per_pixel;  // ||CMS_k - CMS_final||_1 / pixel count
};

struct CmsResult {
    SaliencyMap cms;
    std::vector<ConvergencePoint> trace;
};

/// 1-2-5 ladder starting at 100: 100, 500, 1000, 2000, 5000, 10000, ...
std::vector<std::size_t> default_checkpoints();

/// Streaming mean over a map source (call until nullopt). Produces the same
/// map as compute_cms plus the convergence trace at every checkpoint <= N.
using MapSource = std::function<std::optional<SaliencyMap>()>;
CmsResult cms_streaming(const MapSource& source,
                        std::vector<std::size_t> checkpoints = default_checkpoints());

/// Projects a canonical-frame map onto image coordinates: for every visible
/// vertex the canonical value at its canonical point is splatted around its
/// input point with patch size `patch_sz`, count-normalized exactly as the
/// forward accumulation. Pixels without vertex coverage stay 0.
SaliencyMap reproject(const SaliencyMap& canonical_map, const DenseCorrespondence& corr,
                      int target_width, int target_height, int patch_sz);

}  // namespace csm
