#pragma once

#include <cstdint>

#include "csm/oracle.hpp"

namespace csm {

struct MlpSpec {
    int input_width = 16;
    int input_height = 16;
    int input_channels = 1;
    std::vector<int> hidden = {24, 16};
    int classes = 4;
    std::uint64_t seed = 1;
};

/// Small fully-connected softmax network with deterministic, seed-derived
/// weights. Serves as the bundled synthetic model fixture: it is the one
/// local oracle that declares the randomizable capability, used by the
/// layer-randomization sanity check. Hidden layers use tanh; embeddings are
/// the last hidden activations.
class MlpOracle : public ConfidenceOracle {
public:
    explicit MlpOracle(MlpSpec spec);

    OracleInfo info() const override;
    std::vector<double> score_batch(std::span<const FaceImage> images,
                                    int class_id) const override;
    std::vector<Embedding> embed_batch(std::span<const FaceImage> images) const override;
    std::unique_ptr<ConfidenceOracle> randomize_top_layers(int k,
                                                           std::uint64_t seed) const override;
    int layer_count() const override { return static_cast<int>(layers_.size()); }

private:
    struct Layer {
        int in = 0, out = 0;
        std::vector<double> weights;  // out x in, row-major
        std::vector<double> bias;
    };

    MlpOracle(const MlpOracle&) = default;
    std::vector<double> forward(const FaceImage& image, bool want_hidden,
                                std::vector<double>* hidden_out) const;

    MlpSpec spec_;
    std::vector<Layer> layers_;
    int randomized_top_ = 0;  // for the id string only
};

}  // namespace csm
