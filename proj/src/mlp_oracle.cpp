#include "csm/mlp_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "csm/error.hpp"
#include "csm/rng.hpp"

namespace csm {

namespace {

double population_stddev(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(values.size()));
}

void redraw(std::vector<double>& values, double stddev, Rng& rng) {
    for (double& v : values) v = rng.normal(0.0, stddev);
}

}  // namespace

MlpOracle::MlpOracle(MlpSpec spec) : spec_(std::move(spec)) {
    if (spec_.classes < 2) throw InputError("mlp oracle needs >= 2 classes");
    if (spec_.input_width < 1 || spec_.input_height < 1)
        throw InputError("mlp oracle input size must be >= 1");

    int fan_in = spec_.input_width * spec_.input_height * spec_.input_channels;
    std::vector<int> widths = spec_.hidden;
    widths.push_back(spec_.classes);
    for (std::size_t li = 0; li < widths.size(); ++li) {
        Layer layer;
        layer.in = fan_in;
        layer.out = widths[li];
        if (layer.out < 1) throw InputError("mlp layer width must be >= 1");
        Rng rng(mix_seed(spec_.seed, li));
        const double w_std = 1.0 / std::sqrt(static_cast<double>(fan_in));
        layer.weights.resize(static_cast<std::size_t>(layer.out) * layer.in);
        for (double& w : layer.weights) w = rng.normal(0.0, w_std);
        layer.bias.resize(layer.out);
        for (double& b : layer.bias) b = rng.normal(0.0, 0.1);
        layers_.push_back(std::move(layer));
        fan_in = widths[li];
    }
}

OracleInfo MlpOracle::info() const {
    std::string id = "mlp[seed=" + std::to_string(spec_.seed) + "]";
    if (randomized_top_ > 0) id += "+rand" + std::to_string(randomized_top_);
    return {.id = id,
            .input_width = spec_.input_width,
            .input_height = spec_.input_height,
            .input_channels = spec_.input_channels,
            .num_classes = spec_.classes,
            .embeddings = true,
            .randomizable = true,
            .probabilistic = true};
}

std::vector<double> MlpOracle::forward(const FaceImage& image, bool want_hidden,
                                       std::vector<double>* hidden_out) const {
    const auto px = image.pixels();
    std::vector<double> act(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) act[i] = px[i] / 255.0 - 0.5;

    for (std::size_t li = 0; li < layers_.size(); ++li) {
        const Layer& layer = layers_[li];
        std::vector<double> next(layer.out);
        for (int o = 0; o < layer.out; ++o) {
            double sum = layer.bias[o];
            const double* wrow = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
            for (int i = 0; i < layer.in; ++i) sum += wrow[i] * act[i];
            next[o] = sum;
        }
        const bool last = li + 1 == layers_.size();
        if (!last)
            for (double& v : next) v = std::tanh(v);
        if (want_hidden && hidden_out && !last && li + 2 == layers_.size()) *hidden_out = next;
        act = std::move(next);
    }

    // Softmax with max-shift.
    double mx = *std::max_element(act.begin(), act.end());
    double denom = 0.0;
    for (double& v : act) {
        v = std::exp(v - mx);
        denom += v;
    }
    for (double& v : act) v /= denom;
    return act;
}

std::vector<double> MlpOracle::score_batch(std::span<const FaceImage> images,
                                           int class_id) const {
    check_inputs(images, class_id);
    std::vector<double> out;
    out.reserve(images.size());
    for (const auto& img : images) out.push_back(forward(img, false, nullptr)[class_id]);
    check_scores(out);
    return out;
}

std::vector<Embedding> MlpOracle::embed_batch(std::span<const FaceImage> images) const {
    check_inputs(images, 0);
    std::vector<Embedding> out;
    out.reserve(images.size());
    for (const auto& img : images) {
        std::vector<double> hidden;
        const auto probs = forward(img, true, &hidden);
        const std::vector<double>& src = layers_.size() > 1 ? hidden : probs;
        Embedding e(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) e[i] = static_cast<float>(src[i]);
        out.push_back(std::move(e));
    }
    return out;
}

std::unique_ptr<ConfidenceOracle> MlpOracle::randomize_top_layers(int k,
                                                                  std::uint64_t seed) const {
    if (k < 0 || k > layer_count())
        throw InputError("randomize_top_layers: k = " + std::to_string(k) +
                         " out of range [0, " + std::to_string(layer_count()) + "]");
    auto copy = std::unique_ptr<MlpOracle>(new MlpOracle(*this));
    copy->randomized_top_ = std::max(copy->randomized_top_, k);
    // Parameters are re-drawn i.i.d. zero-mean with each group's original
    // standard deviation, starting from the output layer.
    for (int j = 0; j < k; ++j) {
        const std::size_t li = layers_.size() - 1 - j;
        Layer& layer = copy->layers_[li];
        Rng rng(mix_seed(seed, li));
        redraw(layer.weights, population_stddev(layers_[li].weights), rng);
        redraw(layer.bias, population_stddev(layers_[li].bias), rng);
    }
    return copy;
}

}  // namespace csm
