#include "csm/occlusion.hpp"

#include <algorithm>
#include <limits>

#include "csm/error.hpp"
#include "csm/parallel.hpp"

namespace csm {

PatchBounds patch_bounds(int cx, int cy, int sz, int width, int height) {
    const int lo = sz / 2;  // floor
    PatchBounds b{cx - lo, cy - lo, cx - lo + sz, cy - lo + sz};
    b.x0 = std::max(b.x0, 0);
    b.y0 = std::max(b.y0, 0);
    b.x1 = std::min(b.x1, width);
    b.y1 = std::min(b.y1, height);
    return b;
}

FaceImage occlude(const FaceImage& image, Point2 center, const OcclusionSpec& spec) {
    if (spec.sz < 1) throw InputError("occlusion size must be >= 1");
    const int cx = round_pixel(center.x);
    const int cy = round_pixel(center.y);
    if (!image.in_bounds(cx, cy))
        throw ValidationError("occlusion center (" + std::to_string(cx) + "," +
                              std::to_string(cy) + ") outside image");

    FaceImage out = image;
    const PatchBounds b = patch_bounds(cx, cy, spec.sz, image.width(), image.height());
    for (int y = b.y0; y < b.y1; ++y)
        for (int x = b.x0; x < b.x1; ++x)
            for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = spec.fill;
    return out;
}

std::vector<VertexDrop> vertex_drops(const FaceImage& image, const DenseCorrespondence& corr,
                                     const ConfidenceOracle& oracle, int class_id,
                                     const OcclusionSpec& spec, int workers) {
    if (spec.batch < 1) throw InputError("batch size must be >= 1");
    check_bounds(corr, image.width(), image.height(), std::numeric_limits<int>::max(),
                 std::numeric_limits<int>::max());

    std::vector<std::size_t> visible;
    visible.reserve(corr.size());
    for (std::size_t n = 0; n < corr.size(); ++n)
        if (corr.visible(n)) visible.push_back(n);
    if (visible.empty()) throw ValidationError("correspondence has no visible vertices");

    const double base = oracle.score_batch({&image, 1}, class_id)[0];

    std::vector<double> scores(visible.size());
    const std::size_t batch = static_cast<std::size_t>(spec.batch);
    const std::size_t chunk_count = (visible.size() + batch - 1) / batch;

    parallel_for(chunk_count, workers, [&](std::size_t chunk) {
        const std::size_t begin = chunk * batch;
        const std::size_t end = std::min(begin + batch, visible.size());
        std::vector<FaceImage> variants;
        variants.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i)
            variants.push_back(occlude(image, corr.input_point(visible[i]), spec));
        std::vector<double> batch_scores;
        try {
            batch_scores = oracle.score_batch(variants, class_id);
        } catch (const TransportError& e) {
            throw TransportError("scoring occluded vertices [" + std::to_string(begin) + ", " +
                                     std::to_string(end) + ") failed: " + e.what(),
                                 e.status(), e.attempts());
        }
        std::copy(batch_scores.begin(), batch_scores.end(), scores.begin() + begin);
    });

    std::vector<VertexDrop> drops;
    drops.reserve(visible.size());
    for (std::size_t i = 0; i < visible.size(); ++i)
        drops.push_back({visible[i], base - scores[i]});
    return drops;
}

}  // namespace csm
