#pragma once

#include <functional>
#include <utility>

#include "csm/oracle.hpp"

namespace csm {

/// Always returns the same confidence. Occlusion-invariant by construction.
class ConstantOracle : public ConfidenceOracle {
public:
    ConstantOracle(double value, int width, int height, int channels = 1);
    OracleInfo info() const override;
    std::vector<double> score_batch(std::span<const FaceImage> images,
                                    int class_id) const override;

private:
    double value_;
    int width_, height_, channels_;
};

/// Mean pixel intensity divided by 255: all-white scores 1, all-black 0.
class MeanIntensityOracle : public ConfidenceOracle {
public:
    MeanIntensityOracle(int width, int height, int channels = 1);
    OracleInfo info() const override;
    std::vector<double> score_batch(std::span<const FaceImage> images,
                                    int class_id) const override;

private:
    int width_, height_, channels_;
};

/// phi(I) = sum_i w_i * I_i over raw intensities. Confidence drops under
/// occlusion are exactly linear in the darkened pixels.
class LinearOracle : public ConfidenceOracle {
public:
    LinearOracle(std::vector<double> weights, int width, int height, int channels = 1);
    OracleInfo info() const override;
    std::vector<double> score_batch(std::span<const FaceImage> images,
                                    int class_id) const override;
    const std::vector<double>& weights() const noexcept { return weights_; }

private:
    std::vector<double> weights_;
    int width_, height_, channels_;
};

/// Reads only pixels inside a Euclidean disk: mean intensity there / 255.
/// Occlusions outside the disk change nothing.
class DiskOracle : public ConfidenceOracle {
public:
    DiskOracle(double center_x, double center_y, double radius, int width, int height,
               int channels = 1);
    OracleInfo info() const override;
    std::vector<double> score_batch(std::span<const FaceImage> images,
                                    int class_id) const override;

private:
    double cx_, cy_, radius_;
    int width_, height_, channels_;
};

/// Embedding = raw pixel intensities as floats; score = mean intensity / 255.
class FlattenEmbeddingOracle : public ConfidenceOracle {
public:
    FlattenEmbeddingOracle(int width, int height, int channels = 1);
    OracleInfo info() const override;
    std::vector<double> score_batch(std::span<const FaceImage> images,
                                    int class_id) const override;
    std::vector<Embedding> embed_batch(std::span<const FaceImage> images) const override;

private:
    int width_, height_, channels_;
};

/// Adapter wrapping an arbitrary confidence function. Used to plug custom
/// synthetic confidences (and confidence_tasks functions) into the sweep.
class FunctionOracle : public ConfidenceOracle {
public:
    using ScoreFn = std::function<double(const FaceImage&, int class_id)>;
    using EmbedFn = std::function<Embedding(const FaceImage&)>;

    FunctionOracle(std::string id, int width, int height, int channels, ScoreFn score,
                   EmbedFn embed = nullptr);
    OracleInfo info() const override;
    std::vector<double> score_batch(std::span<const FaceImage> images,
                                    int class_id) const override;
    std::vector<Embedding> embed_batch(std::span<const FaceImage> images) const override;

private:
    std::string id_;
    int width_, height_, channels_;
    ScoreFn score_;
    EmbedFn embed_;
};

}  // namespace csm
