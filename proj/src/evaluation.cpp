#include "csm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "csm/error.hpp"
#include "csm/png_io.hpp"

namespace csm {

StandardizedHeatmap standardize(const SaliencyMap& heatmap, double s) {
    if (!(s > 0.0)) throw InputError("standardize: s must be positive");
    const auto values = heatmap.values();
    float lo = values[0], hi = values[0];
    for (float v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    StandardizedHeatmap out;
    out.width = heatmap.width();
    out.height = heatmap.height();
    out.scale = s;
    out.values.assign(values.size(), 0.0);
    if (hi == lo) return out;  // constant heatmap carries no signal

    const double span = static_cast<double>(hi) - lo;
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.values[i] = (static_cast<double>(values[i]) - lo) / span;
        sum += out.values[i];
    }
    const double factor = s / sum;
    for (double& v : out.values) v *= factor;
    return out;
}

FaceImage negative_explanation(const FaceImage& image, const StandardizedHeatmap& heatmap) {
    if (heatmap.width != image.width() || heatmap.height != image.height())
        throw ValidationError("negative_explanation: heatmap " + std::to_string(heatmap.width) +
                              "x" + std::to_string(heatmap.height) + " vs image " +
                              std::to_string(image.width()) + "x" +
                              std::to_string(image.height()));
    std::vector<std::uint8_t> pixels(image.pixels().size());
    std::size_t i = 0;
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            const double h = std::clamp(heatmap.at(x, y), 0.0, 1.0);
            for (int c = 0; c < image.channels(); ++c, ++i)
                pixels[i] = static_cast<std::uint8_t>(
                    std::floor((1.0 - h) * image.at(x, y, c) + 0.5));
        }
    }
    return FaceImage(image.width(), image.height(), image.channels(), std::move(pixels));
}

double average_drop(std::span<const ConfidencePair> pairs) {
    if (pairs.empty()) throw InputError("average_drop: no records");
    double sum = 0.0;
    for (const auto& p : pairs) {
        if (!(p.original > 0.0))
            throw InputError("average_drop: M(I) must be positive for image '" + p.image_id +
                             "'");
        sum += std::max(0.0, (p.original - p.explanation) / p.original);
    }
    return sum / static_cast<double>(pairs.size()) * 100.0;
}

double pct_increase(std::span<const ConfidencePair> pairs) {
    if (pairs.empty()) throw InputError("pct_increase: no records");
    std::size_t increases = 0;
    for (const auto& p : pairs) increases += (p.explanation > p.original);
    return static_cast<double>(increases) / static_cast<double>(pairs.size()) * 100.0;
}

std::map<std::string, double> win_pct(std::span<const EvaluationRecord> records) {
    if (records.empty()) throw InputError("win_pct: no records");
    const auto& methods = records.front().explanation;
    if (methods.empty()) throw InputError("win_pct: records carry no methods");

    std::map<std::string, double> wins;
    for (const auto& [name, _] : methods) wins[name] = 0.0;

    for (const auto& rec : records) {
        if (rec.explanation.size() != methods.size())
            throw InputError("win_pct: image '" + rec.image_id +
                             "' does not cover every method");
        double lowest = std::numeric_limits<double>::infinity();
        for (const auto& [name, conf] : rec.explanation) {
            if (!wins.count(name))
                throw InputError("win_pct: image '" + rec.image_id + "' names unknown method '" +
                                 name + "'");
            lowest = std::min(lowest, conf);
        }
        std::vector<const std::string*> tied;
        for (const auto& [name, conf] : rec.explanation)
            if (conf == lowest) tied.push_back(&name);
        const double share = 1.0 / static_cast<double>(tied.size());
        for (const auto* name : tied) wins[*name] += share;
    }

    const double scale = 100.0 / static_cast<double>(records.size());
    for (auto& [_, v] : wins) v *= scale;
    return wins;
}

std::vector<ConfidencePair> pairs_for_method(std::span<const EvaluationRecord> records,
                                             const std::string& method) {
    std::vector<ConfidencePair> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        const auto it = rec.explanation.find(method);
        if (it == rec.explanation.end())
            throw InputError("image '" + rec.image_id + "' has no confidence for method '" +
                             method + "'");
        out.push_back({rec.image_id, rec.original, it->second});
    }
    return out;
}

SaliencyMap load_heatmap(const std::filesystem::path& path) {
    if (path.extension() == ".csm") return read_saliency(path);
    const FaceImage img = read_png(path);
    std::vector<float> values(img.pixel_count());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            double v = 0.0;
            for (int c = 0; c < img.channels(); ++c) v += img.at(x, y, c);
            values[static_cast<std::size_t>(y) * img.width() + x] =
                static_cast<float>(v / (255.0 * img.channels()));
        }
    return SaliencyMap(img.width(), img.height(), Frame::image, std::move(values));
}

nlohmann::json evaluation_report(std::span<const EvaluationRecord> records,
                                 const nlohmann::json& config_echo,
                                 const std::string& oracle_id) {
    nlohmann::json methods = nlohmann::json::object();
    const auto wins = win_pct(records);
    for (const auto& [name, win] : wins) {
        const auto pairs = pairs_for_method(records, name);
        methods[name] = {{"avg_drop", average_drop(pairs)},
                         {"pct_increase", pct_increase(pairs)},
                         {"win_pct", win}};
    }
    return nlohmann::json{{"methods", methods},
                          {"images", records.size()},
                          {"oracle", oracle_id},
                          {"config", config_echo}};
}

}  // namespace csm
