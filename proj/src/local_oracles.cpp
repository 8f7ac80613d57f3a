#include "csm/local_oracles.hpp"

#include <cmath>

#include "csm/error.hpp"

namespace csm {

ConstantOracle::ConstantOracle(double value, int width, int height, int channels)
    : value_(value), width_(width), height_(height), channels_(channels) {}

OracleInfo ConstantOracle::info() const {
    return {.id = "constant",
            .input_width = width_,
            .input_height = height_,
            .input_channels = channels_};
}

std::vector<double> ConstantOracle::score_batch(std::span<const FaceImage> images,
                                                int class_id) const {
    check_inputs(images, class_id);
    return std::vector<double>(images.size(), value_);
}

MeanIntensityOracle::MeanIntensityOracle(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {}

OracleInfo MeanIntensityOracle::info() const {
    return {.id = "mean",
            .input_width = width_,
            .input_height = height_,
            .input_channels = channels_,
            .probabilistic = true};
}

std::vector<double> MeanIntensityOracle::score_batch(std::span<const FaceImage> images,
                                                     int class_id) const {
    check_inputs(images, class_id);
    std::vector<double> out;
    out.reserve(images.size());
    for (const auto& img : images) {
        double sum = 0.0;
        for (std::uint8_t p : img.pixels()) sum += p;
        out.push_back(sum / (255.0 * static_cast<double>(img.pixels().size())));
    }
    check_scores(out);
    return out;
}

LinearOracle::LinearOracle(std::vector<double> weights, int width, int height, int channels)
    : weights_(std::move(weights)), width_(width), height_(height), channels_(channels) {
    if (weights_.size() != static_cast<std::size_t>(width) * height * channels)
        throw InputError("linear oracle weight count does not match input shape");
}

OracleInfo LinearOracle::info() const {
    return {.id = "linear",
            .input_width = width_,
            .input_height = height_,
            .input_channels = channels_};
}

std::vector<double> LinearOracle::score_batch(std::span<const FaceImage> images,
                                              int class_id) const {
    check_inputs(images, class_id);
    std::vector<double> out;
    out.reserve(images.size());
    for (const auto& img : images) {
        const auto px = img.pixels();
        double sum = 0.0;
        for (std::size_t i = 0; i < px.size(); ++i) sum += weights_[i] * px[i];
        out.push_back(sum);
    }
    check_scores(out);
    return out;
}

DiskOracle::DiskOracle(double center_x, double center_y, double radius, int width, int height,
                       int channels)
    : cx_(center_x), cy_(center_y), radius_(radius), width_(width), height_(height),
      channels_(channels) {
    if (radius <= 0) throw InputError("disk oracle radius must be positive");
}

OracleInfo DiskOracle::info() const {
    return {.id = "disk",
            .input_width = width_,
            .input_height = height_,
            .input_channels = channels_,
            .probabilistic = true};
}

std::vector<double> DiskOracle::score_batch(std::span<const FaceImage> images,
                                            int class_id) const {
    check_inputs(images, class_id);
    std::vector<double> out;
    out.reserve(images.size());
    for (const auto& img : images) {
        double sum = 0.0;
        std::size_t count = 0;
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                const double dx = x - cx_, dy = y - cy_;
                if (dx * dx + dy * dy > radius_ * radius_) continue;
                for (int c = 0; c < img.channels(); ++c) sum += img.at(x, y, c);
                count += img.channels();
            }
        }
        out.push_back(count ? sum / (255.0 * static_cast<double>(count)) : 0.0);
    }
    check_scores(out);
    return out;
}

FlattenEmbeddingOracle::FlattenEmbeddingOracle(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {}

OracleInfo FlattenEmbeddingOracle::info() const {
    return {.id = "flatten",
            .input_width = width_,
            .input_height = height_,
            .input_channels = channels_,
            .embeddings = true,
            .probabilistic = true};
}

std::vector<double> FlattenEmbeddingOracle::score_batch(std::span<const FaceImage> images,
                                                        int class_id) const {
    check_inputs(images, class_id);
    std::vector<double> out;
    out.reserve(images.size());
    for (const auto& img : images) {
        double sum = 0.0;
        for (std::uint8_t p : img.pixels()) sum += p;
        out.push_back(sum / (255.0 * static_cast<double>(img.pixels().size())));
    }
    return out;
}

std::vector<Embedding> FlattenEmbeddingOracle::embed_batch(
    std::span<const FaceImage> images) const {
    check_inputs(images, 0);
    std::vector<Embedding> out;
    out.reserve(images.size());
    for (const auto& img : images) {
        Embedding e;
        e.reserve(img.pixels().size());
        for (std::uint8_t p : img.pixels()) e.push_back(static_cast<float>(p));
        out.push_back(std::move(e));
    }
    return out;
}

FunctionOracle::FunctionOracle(std::string id, int width, int height, int channels, ScoreFn score,
                               EmbedFn embed)
    : id_(std::move(id)), width_(width), height_(height), channels_(channels),
      score_(std::move(score)), embed_(std::move(embed)) {
    if (!score_) throw InputError("function oracle requires a score function");
}

OracleInfo FunctionOracle::info() const {
    return {.id = id_,
            .input_width = width_,
            .input_height = height_,
            .input_channels = channels_,
            .embeddings = embed_ != nullptr};
}

std::vector<double> FunctionOracle::score_batch(std::span<const FaceImage> images,
                                                int class_id) const {
    check_inputs(images, class_id);
    std::vector<double> out;
    out.reserve(images.size());
    for (const auto& img : images) out.push_back(score_(img, class_id));
    check_scores(out);
    return out;
}

std::vector<Embedding> FunctionOracle::embed_batch(std::span<const FaceImage> images) const {
    if (!embed_) return ConfidenceOracle::embed_batch(images);
    check_inputs(images, 0);
    std::vector<Embedding> out;
    out.reserve(images.size());
    for (const auto& img : images) out.push_back(embed_(img));
    return out;
}

}  // namespace csm
