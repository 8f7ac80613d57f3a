#include "csm/confidence_tasks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "csm/error.hpp"
#include "csm/parallel.hpp"

namespace csm {

double cosine(std::span<const float> u, std::span<const float> v) {
    if (u.size() != v.size())
        throw InputError("cosine: dimension mismatch " + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()));
    if (u.empty()) throw InputError("cosine: empty vectors");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += static_cast<double>(u[i]) * v[i];
        nu += static_cast<double>(u[i]) * u[i];
        nv += static_cast<double>(v[i]) * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw DomainError("cosine: zero-norm vector");
    // sqrt(nu * nv) keeps cosine(u, u) == 1 exactly: dot and nu accumulate
    // identically for bitwise-equal inputs, and sqrt(x*x) == x under
    // round-to-nearest.
    return std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0);
}

Gallery::Gallery(std::vector<GalleryEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("gallery must be non-empty");
    const std::size_t dim = entries_.front().feature.size();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.feature.size() != dim)
            throw ValidationError("gallery entry " + std::to_string(i) +
                                  " has inconsistent dimension");
        double norm = 0.0;
        for (float v : e.feature) {
            if (!std::isfinite(v))
                throw ValidationError("gallery entry " + std::to_string(i) +
                                      " has a non-finite value");
            norm += static_cast<double>(v) * v;
        }
        if (norm == 0.0)
            throw ValidationError("gallery entry " + std::to_string(i) + " has zero norm");
    }
}

bool Gallery::has_class(int class_id) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const GalleryEntry& e) { return e.class_id == class_id; });
}

Gallery load_gallery(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("gallery not found: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    long long dim = -1, count = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos || line[0] == '#') continue;
        std::istringstream ss(line);
        if (!(ss >> dim >> count) || dim < 1 || count < 1)
            throw ParseError("expected gallery header 'D N'", line_no);
        break;
    }
    if (dim < 0) throw ParseError("missing gallery header");

    std::vector<GalleryEntry> entries;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos || line[0] == '#') continue;
        std::istringstream ss(line);
        GalleryEntry e;
        if (!(ss >> e.class_id)) throw ParseError("expected class id", line_no);
        e.feature.resize(dim);
        for (long long d = 0; d < dim; ++d)
            if (!(ss >> e.feature[d]))
                throw ParseError("expected " + std::to_string(dim) + " feature values", line_no);
        std::string extra;
        if (ss >> extra) throw ParseError("unexpected trailing token", line_no);
        entries.push_back(std::move(e));
    }
    if (static_cast<long long>(entries.size()) != count)
        throw ValidationError("gallery header declares " + std::to_string(count) +
                              " entries but " + std::to_string(entries.size()) + " found");
    return Gallery(std::move(entries));
}

void save_gallery(const Gallery& gallery, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open for writing: " + path.string());
    out << gallery.entry(0).feature.size() << " " << gallery.size() << "\n";
    for (std::size_t i = 0; i < gallery.size(); ++i) {
        const auto& e = gallery.entry(i);
        out << e.class_id;
        for (float v : e.feature) out << " " << v;
        out << "\n";
    }
    if (!out) throw InputError("write failed: " + path.string());
}

double zero_shot_confidence(const FaceImage& query, int class_id, const Gallery& gallery,
                            const ConfidenceOracle& oracle) {
    if (!gallery.has_class(class_id))
        throw InputError("gallery has no entry with class " + std::to_string(class_id));
    const Embedding q = oracle.embed_one(query);
    double best = -2.0;
    for (std::size_t i = 0; i < gallery.size(); ++i) {
        const auto& e = gallery.entry(i);
        if (e.class_id != class_id) continue;
        const double c = cosine(e.feature, q);
        if (c > best) best = c;  // strict: ties keep the lowest index
    }
    return best;
}

double verification_confidence(const VerificationPair& pair, const ConfidenceOracle& oracle,
                               SignConvention convention) {
    if (pair.label != 1 && pair.label != -1)
        throw InputError("verification label must be -1 or +1");
    if (!std::isfinite(pair.threshold)) throw InputError("verification threshold must be finite");
    const FaceImage imgs[2] = {pair.q1, pair.q2};
    const auto features = oracle.embed_batch(imgs);
    const double cos = cosine(features[0], features[1]);
    const double c =
        convention == SignConvention::paper ? pair.label : -pair.label;
    return c * (pair.threshold - cos);
}

SaliencyMap paired_cis(const VerificationPair& pair, const DenseCorrespondence& corr_q1,
                       const DenseCorrespondence& corr_q2, int canonical_width,
                       int canonical_height, const ConfidenceOracle& oracle,
                       const OcclusionSpec& spec, SignConvention convention, int workers) {
    if (corr_q1.size() != corr_q2.size())
        throw ValidationError("pair correspondences disagree on vertex count: " +
                              std::to_string(corr_q1.size()) + " vs " +
                              std::to_string(corr_q2.size()));
    check_bounds(corr_q1, pair.q1.width(), pair.q1.height(), canonical_width, canonical_height);
    check_bounds(corr_q2, pair.q2.width(), pair.q2.height(), canonical_width, canonical_height);

    std::vector<std::size_t> visible;
    for (std::size_t n = 0; n < corr_q1.size(); ++n)
        if (corr_q1.visible(n) && corr_q2.visible(n)) visible.push_back(n);
    if (visible.empty()) throw ValidationError("no vertex is visible in both images");

    const double base = verification_confidence(pair, oracle, convention);
    const double sign = convention == SignConvention::paper ? pair.label : -pair.label;

    std::vector<double> drops(visible.size());
    const std::size_t batch = std::max<std::size_t>(1, static_cast<std::size_t>(spec.batch) / 2);
    const std::size_t chunk_count = (visible.size() + batch - 1) / batch;

    parallel_for(chunk_count, workers, [&](std::size_t chunk) {
        const std::size_t begin = chunk * batch;
        const std::size_t end = std::min(begin + batch, visible.size());
        // Interleaved [occ_q1_v, occ_q2_v, ...]: the same facial region is
        // occluded in both images of the pair.
        std::vector<FaceImage> variants;
        variants.reserve((end - begin) * 2);
        for (std::size_t i = begin; i < end; ++i) {
            variants.push_back(occlude(pair.q1, corr_q1.input_point(visible[i]), spec));
            variants.push_back(occlude(pair.q2, corr_q2.input_point(visible[i]), spec));
        }
        const auto features = oracle.embed_batch(variants);
        for (std::size_t i = begin; i < end; ++i) {
            const auto& f1 = features[(i - begin) * 2];
            const auto& f2 = features[(i - begin) * 2 + 1];
            const double conf = sign * (pair.threshold - cosine(f1, f2));
            drops[i] = base - conf;
        }
    });

    const int fsz = canonical_patch_size(spec.sz, pair.q1.height(), canonical_height);
    CanonicalAccumulator acc(canonical_width, canonical_height, fsz);
    for (std::size_t i = 0; i < visible.size(); ++i) {
        const auto& p = corr_q1.canonical_point(visible[i]);
        acc.splat(drops[i], round_pixel(p.x), round_pixel(p.y));
    }

    MapMeta meta;
    meta.occlusion_sz = spec.sz;
    meta.oracle_id = oracle.info().id;
    meta.confidence_kind = "raw";
    return acc.finalize(Frame::canonical, std::move(meta));
}

}  // namespace csm
