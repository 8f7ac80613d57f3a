#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "csm/canonical.hpp"
#include "csm/correspondence.hpp"
#include "csm/image.hpp"
#include "csm/oracle.hpp"

namespace csm {

/// Cosine similarity in [-1, 1]. Both vectors must be non-zero-norm and of
/// equal dimension.
double cosine(std::span<const float> u, std::span<const float> v);

struct GalleryEntry {
    int class_id;
    Embedding feature;
};

/// Labeled reference embeddings for zero-shot recognition.
class Gallery {
public:
    explicit Gallery(std::vector<GalleryEntry> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    const GalleryEntry& entry(std::size_t i) const { return entries_[i]; }
    bool has_class(int class_id) const;

    const std::vector<GalleryEntry>& entries() const noexcept { return entries_; }

private:
    std::vector<GalleryEntry> entries_;
};

/// Gallery file: header "D N", then N lines "class_id v1 ... vD".
Gallery load_gallery(const std::filesystem::path& path);
void save_gallery(const Gallery& gallery, const std::filesystem::path& path);

/// Max cosine similarity between the query embedding and gallery entries of
/// the target class; ties resolve to the lowest gallery index. Usable as the
/// confidence phi in the occlusion sweep.
double zero_shot_confidence(const FaceImage& query, int class_id, const Gallery& gallery,
                            const ConfidenceOracle& oracle);

/// Whether label +1 means genuine (paper's literal formula) or the mapping is
/// swapped. The paper's formula gives a confidently-matching genuine pair a
/// negative confidence; `flipped` negates it.
enum class SignConvention { paper, flipped };

struct VerificationPair {
    FaceImage q1;
    FaceImage q2;
    int label = 1;          // c in {-1, +1}
    double threshold = 0.5; // tau
};

/// c * (tau - cosine(embed(q1), embed(q2))).
double verification_confidence(const VerificationPair& pair, const ConfidenceOracle& oracle,
                               SignConvention convention = SignConvention::paper);

/// CIS for verification: each vertex's patch is occluded in BOTH images of the
/// pair simultaneously; the drop of verification confidence is splatted onto
/// the canonical face (using q1's canonical points) with density
/// normalization, exactly as compute_cis.
SaliencyMap paired_cis(const VerificationPair& pair, const DenseCorrespondence& corr_q1,
                       const DenseCorrespondence& corr_q2, int canonical_width,
                       int canonical_height, const ConfidenceOracle& oracle,
                       const OcclusionSpec& spec,
                       SignConvention convention = SignConvention::paper, int workers = 1);

}  // namespace csm
