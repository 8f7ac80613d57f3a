#include "csm/oracle.hpp"

#include <cmath>

#include "csm/error.hpp"

namespace csm {

std::vector<Embedding> ConfidenceOracle::embed_batch(std::span<const FaceImage>) const {
    throw UnsupportedError("oracle '" + info().id + "' does not declare the embeddings capability");
}

std::unique_ptr<ConfidenceOracle> ConfidenceOracle::randomize_top_layers(int, std::uint64_t) const {
    throw UnsupportedError("oracle '" + info().id +
                           "' does not declare the randomizable capability");
}

void ConfidenceOracle::check_inputs(std::span<const FaceImage> images, int class_id) const {
    const OracleInfo oi = info();
    for (const auto& img : images) {
        if (img.width() != oi.input_width || img.height() != oi.input_height ||
            img.channels() != oi.input_channels)
            throw InputError("oracle '" + oi.id + "' expects " + std::to_string(oi.input_width) +
                             "x" + std::to_string(oi.input_height) + "x" +
                             std::to_string(oi.input_channels) + ", got " +
                             std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                             "x" + std::to_string(img.channels()));
    }
    if (oi.num_classes > 0 && (class_id < 0 || class_id >= oi.num_classes))
        throw InputError("class " + std::to_string(class_id) + " out of range [0, " +
                         std::to_string(oi.num_classes) + ") for oracle '" + oi.id + "'");
}

void ConfidenceOracle::check_scores(std::span<const double> scores) const {
    const OracleInfo oi = info();
    for (double s : scores) {
        if (!std::isfinite(s))
            throw ValidationError("oracle '" + oi.id + "' produced a non-finite score");
        if (oi.probabilistic && (s < 0.0 || s > 1.0))
            throw ValidationError("probabilistic oracle '" + oi.id +
                                  "' produced a score outside [0,1]");
    }
}

}  // namespace csm
