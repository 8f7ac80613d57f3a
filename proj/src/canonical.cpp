#include "csm/canonical.hpp"

#include <algorithm>
#include <cmath>

#include "csm/error.hpp"

namespace csm {

int canonical_patch_size(int sz, int input_height, int canonical_height) {
    if (sz < 1) throw InputError("patch size must be >= 1");
    if (input_height < 1 || canonical_height < 1)
        throw InputError("image heights must be >= 1");
    const long long scaled =
        std::llround(static_cast<double>(sz) * canonical_height / input_height);
    return static_cast<int>(std::max(1LL, scaled));
}

CanonicalAccumulator::CanonicalAccumulator(int width, int height, int patch_sz)
    : width_(width), height_(height), patch_sz_(patch_sz),
      sums_(static_cast<std::size_t>(width) * height, 0.0), counts_(width, height) {
    if (patch_sz < 1) throw InputError("canonical patch size must be >= 1");
}

void CanonicalAccumulator::splat(double value, int cx, int cy) {
    if (cx < 0 || cx >= width_ || cy < 0 || cy >= height_)
        throw ValidationError("splat center (" + std::to_string(cx) + "," + std::to_string(cy) +
                              ") outside canonical frame");
    const PatchBounds b = patch_bounds(cx, cy, patch_sz_, width_, height_);
    for (int y = b.y0; y < b.y1; ++y) {
        for (int x = b.x0; x < b.x1; ++x) {
            sums_[static_cast<std::size_t>(y) * width_ + x] += value;
            counts_.at(x, y) += 1;
        }
    }
}

SaliencyMap CanonicalAccumulator::finalize(Frame frame, MapMeta meta) const {
    std::vector<float> values(sums_.size(), 0.0f);
    for (std::size_t i = 0; i < sums_.size(); ++i) {
        const std::uint32_t n = counts_.counts()[i];
        if (n > 0) values[i] = static_cast<float>(sums_[i] / n);
    }
    return SaliencyMap(width_, height_, frame, std::move(values), std::move(meta));
}

SaliencyMap compute_cis(const FaceImage& image, const DenseCorrespondence& corr,
                        int canonical_width, int canonical_height, const ConfidenceOracle& oracle,
                        int class_id, const OcclusionSpec& spec, int workers) {
    check_bounds(corr, image.width(), image.height(), canonical_width, canonical_height);

    const auto drops = vertex_drops(image, corr, oracle, class_id, spec, workers);

    const int fsz = canonical_patch_size(spec.sz, image.height(), canonical_height);
    CanonicalAccumulator acc(canonical_width, canonical_height, fsz);
    // Accumulation stays in vertex-index order for bit-reproducibility.
    for (const auto& d : drops) {
        const auto& p = corr.canonical_point(d.index);
        acc.splat(d.drop, round_pixel(p.x), round_pixel(p.y));
    }

    MapMeta meta;
    const OracleInfo oi = oracle.info();
    meta.occlusion_sz = spec.sz;
    meta.oracle_id = oi.id;
    meta.confidence_kind = oi.probabilistic ? "probability" : "raw";
    return acc.finalize(Frame::canonical, std::move(meta));
}

namespace {

void require_same_canonical_shape(const SaliencyMap& a, const SaliencyMap& first) {
    if (a.frame() != Frame::canonical)
        throw ValidationError("CMS aggregation requires canonical-frame maps");
    if (a.width() != first.width() || a.height() != first.height())
        throw ValidationError("CMS aggregation: map shape " + std::to_string(a.width()) + "x" +
                              std::to_string(a.height()) + " does not match " +
                              std::to_string(first.width()) + "x" +
                              std::to_string(first.height()));
}

}  // namespace

SaliencyMap compute_cms(std::span<const SaliencyMap> maps) {
    if (maps.empty()) throw ValidationError("CMS requires at least one CIS map");
    const SaliencyMap& first = maps.front();
    std::vector<double> sums(first.pixel_count(), 0.0);
    for (const auto& m : maps) {
        require_same_canonical_shape(m, first);
        const auto values = m.values();
        for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += values[i];
    }
    std::vector<float> out(sums.size());
    const double n = static_cast<double>(maps.size());
    for (std::size_t i = 0; i < sums.size(); ++i) out[i] = static_cast<float>(sums[i] / n);
    MapMeta meta = first.meta();
    return SaliencyMap(first.width(), first.height(), Frame::canonical, std::move(out),
                       std::move(meta));
}

std::vector<std::size_t> default_checkpoints() {
    std::vector<std::size_t> cp;
    for (std::size_t decade = 100; decade <= 100000000; decade *= 10)
        for (std::size_t m : {1, 2, 5}) {
            if (decade == 100 && m == 2) continue;  // ladder starts 100, 500, 1000, ...
            cp.push_back(decade * m);
        }
    return cp;
}

CmsResult cms_streaming(const MapSource& source, std::vector<std::size_t> checkpoints) {
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

    std::vector<double> sums;
    std::vector<std::pair<std::size_t, std::vector<double>>> snapshots;
    std::size_t n = 0;
    int width = 0, height = 0;
    MapMeta meta;
    std::size_t next_checkpoint = 0;

    for (;;) {
        auto m = source();
        if (!m) break;
        if (n == 0) {
            width = m->width();
            height = m->height();
            meta = m->meta();
            sums.assign(m->pixel_count(), 0.0);
        }
        if (m->frame() != Frame::canonical)
            throw ValidationError("CMS aggregation requires canonical-frame maps");
        if (m->width() != width || m->height() != height)
            throw ValidationError("CMS aggregation: map shape mismatch in stream");
        const auto values = m->values();
        for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += values[i];
        ++n;
        if (next_checkpoint < checkpoints.size() && n == checkpoints[next_checkpoint]) {
            snapshots.emplace_back(n, sums);
            ++next_checkpoint;
        }
    }
    if (n == 0) throw ValidationError("CMS requires at least one CIS map");

    const double dn = static_cast<double>(n);
    std::vector<float> out(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i)
        out[i] = static_cast<float>(sums[i] / dn);

    CmsResult result{SaliencyMap(width, height, Frame::canonical, std::move(out), meta), {}};
    for (const auto& [k, snap] : snapshots) {
        double l1 = 0.0;
        const double dk = static_cast<double>(k);
        for (std::size_t i = 0; i < sums.size(); ++i)
            l1 += std::abs(snap[i] / dk - sums[i] / dn);
        result.trace.push_back({k, l1 / static_cast<double>(sums.size())});
    }
    return result;
}

SaliencyMap reproject(const SaliencyMap& canonical_map, const DenseCorrespondence& corr,
                      int target_width, int target_height, int patch_sz) {
    if (canonical_map.frame() != Frame::canonical)
        throw ValidationError("reproject expects a canonical-frame map");
    check_bounds(corr, target_width, target_height, canonical_map.width(),
                 canonical_map.height());

    CanonicalAccumulator acc(target_width, target_height, patch_sz);
    for (std::size_t n = 0; n < corr.size(); ++n) {
        if (!corr.visible(n)) continue;
        const auto& pc = corr.canonical_point(n);
        const double v = canonical_map.at(round_pixel(pc.x), round_pixel(pc.y));
        const auto& pi = corr.input_point(n);
        acc.splat(v, round_pixel(pi.x), round_pixel(pi.y));
    }
    MapMeta meta = canonical_map.meta();
    return acc.finalize(Frame::image, std::move(meta));
}

}  // namespace csm
