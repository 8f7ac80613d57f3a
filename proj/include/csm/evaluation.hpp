#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "csm/image.hpp"
#include "csm/saliency_map.hpp"

namespace csm {

/// Min-max normalized heatmap rescaled so its pixel sum equals `scale`.
/// A constant source heatmap standardizes to all zeros.
struct StandardizedHeatmap {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    double scale = 0.0;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

StandardizedHeatmap standardize(const SaliencyMap& heatmap, double s);

/// Negative explanation image E = (1 - H) * I per channel, H clipped to [0,1],
/// result intensities rounded half up.
FaceImage negative_explanation(const FaceImage& image, const StandardizedHeatmap& heatmap);

/// Original/explanation confidence of one image under one method.
struct ConfidencePair {
    std::string image_id;
    double original;     // M(I)
    double explanation;  // M(E)
};

/// mean over images of max(0, (M(I) - M(E)) / M(I)) * 100. Requires M(I) > 0.
double average_drop(std::span<const ConfidencePair> pairs);

/// 100 * fraction of images where M(E) strictly exceeds M(I).
double pct_increase(std::span<const ConfidencePair> pairs);

/// Original confidence plus explanation confidences for every method.
struct EvaluationRecord {
    std::string image_id;
    double original;
    std::map<std::string, double> explanation;  // method -> M(E)
};

/// Per image the method with the strictly lowest M(E) wins; exact ties split
/// the win equally. The returned percentages sum to 100.
std::map<std::string, double> win_pct(std::span<const EvaluationRecord> records);

std::vector<ConfidencePair> pairs_for_method(std::span<const EvaluationRecord> records,
                                             const std::string& method);

/// Imports a third-party heatmap: .csm files verbatim, or an 8-bit grayscale
/// image rescaled to [0,1] (image frame).
SaliencyMap load_heatmap(const std::filesystem::path& path);

/// {method -> {avg_drop, pct_increase, win_pct}} plus config echo + oracle id.
nlohmann::json evaluation_report(std::span<const EvaluationRecord> records,
                                 const nlohmann::json& config_echo,
                                 const std::string& oracle_id);

}  // namespace csm
