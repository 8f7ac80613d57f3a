#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "csm/image.hpp"

namespace csm {

using Embedding = std::vector<float>;

struct OracleInfo {
    std::string id;
    int input_width = 0;
    int input_height = 0;
    int input_channels = 0;
    int num_classes = 0;  // 0 = class ids unconstrained (non-classification confidence)
    bool scores = true;
    bool embeddings = false;
    bool randomizable = false;
    bool probabilistic = false;  // scores are softmax-style probabilities in [0,1]
};

/// Uniform black-box interface to a face model: per-class confidence plus
/// optional embedding extraction and layer randomization. Implementations are
/// deterministic (same input bytes, same score) and safe for concurrent
/// read-only use; no operation mutates the oracle.
class ConfidenceOracle {
public:
    virtual ~ConfidenceOracle() = default;

    virtual OracleInfo info() const = 0;

    /// One finite score per image, order-preserving. The batch result equals
    /// elementwise single-image results.
    virtual std::vector<double> score_batch(std::span<const FaceImage> images,
                                            int class_id) const = 0;

    /// One feature vector per image. Requires the embeddings capability.
    virtual std::vector<Embedding> embed_batch(std::span<const FaceImage> images) const;

    /// Functional re-initialization of the top k parameter groups, counted
    /// from the output layer. k = 0 returns a behavioral copy. Requires the
    /// randomizable capability; deterministic given seed.
    virtual std::unique_ptr<ConfidenceOracle> randomize_top_layers(int k,
                                                                   std::uint64_t seed) const;

    virtual int layer_count() const { return 0; }

    double score_one(const FaceImage& image, int class_id) const {
        return score_batch({&image, 1}, class_id)[0];
    }
    Embedding embed_one(const FaceImage& image) const { return embed_batch({&image, 1})[0]; }

protected:
    /// Shared precondition checks: input sizes match info(), class id valid.
    void check_inputs(std::span<const FaceImage> images, int class_id) const;
    /// Shared postcondition checks: finite, in [0,1] when probabilistic.
    void check_scores(std::span<const double> scores) const;
};

}  // namespace csm
