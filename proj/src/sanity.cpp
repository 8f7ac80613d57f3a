#include "csm/sanity.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "csm/error.hpp"
#include "csm/rng.hpp"

namespace csm {

double map_similarity(const SaliencyMap& a, const SaliencyMap& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw ValidationError("map_similarity: shape mismatch");
    if (a.frame() != b.frame()) throw ValidationError("map_similarity: frame mismatch");

    const auto va = a.values();
    const auto vb = b.values();
    if (std::equal(va.begin(), va.end(), vb.begin())) {
        // Identical maps correlate at exactly 1 unless they are constant.
        bool constant = true;
        for (float v : va)
            if (v != va[0]) {
                constant = false;
                break;
            }
        return constant ? 0.0 : 1.0;
    }

    const double n = static_cast<double>(va.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        ma += va[i];
        mb += vb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double da = va[i] - ma;
        const double db = vb[i] - mb;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) return 0.0;
    return std::clamp(cov / (std::sqrt(var_a) * std::sqrt(var_b)), -1.0, 1.0);
}

namespace {

SaliencyMap cms_over(const ConfidenceOracle& oracle, std::span<const SanityInput> inputs,
                     int canonical_width, int canonical_height, const OcclusionSpec& spec,
                     int workers) {
    std::vector<SaliencyMap> maps;
    maps.reserve(inputs.size());
    for (const auto& in : inputs)
        maps.push_back(compute_cis(in.image, in.corr, canonical_width, canonical_height, oracle,
                                   in.class_id, spec, workers));
    return compute_cms(maps);
}

}  // namespace

SanityReport sanity_check(const ConfidenceOracle& oracle, std::span<const SanityInput> inputs,
                          int canonical_width, int canonical_height, const OcclusionSpec& spec,
                          int K, std::uint64_t seed, int workers,
                          const std::string& image_set_id) {
    if (inputs.empty()) throw InputError("sanity_check: need at least one image");
    if (K < 0) throw InputError("sanity_check: K must be >= 0");
    if (K > 0) {
        if (!oracle.info().randomizable)
            throw UnsupportedError("oracle '" + oracle.info().id + "' is not randomizable");
        if (K > oracle.layer_count())
            throw InputError("sanity_check: K = " + std::to_string(K) + " exceeds layer count " +
                             std::to_string(oracle.layer_count()));
    }

    SanityReport report;
    report.seed = seed;
    report.oracle_id = oracle.info().id;
    report.image_set_id = image_set_id;

    const SaliencyMap reference =
        cms_over(oracle, inputs, canonical_width, canonical_height, spec, workers);
    // k = 0 compares the intact pipeline with itself: exactly 1 by definition,
    // even when the reference map is constant.
    report.k.push_back(0);
    report.similarity.push_back(1.0);

    for (int k = 1; k <= K; ++k) {
        const auto randomized = oracle.randomize_top_layers(k, mix_seed(seed, k));
        const SaliencyMap cms_k =
            cms_over(*randomized, inputs, canonical_width, canonical_height, spec, workers);
        report.k.push_back(k);
        report.similarity.push_back(map_similarity(reference, cms_k));
    }
    return report;
}

nlohmann::json sanity_report_json(const SanityReport& report) {
    return nlohmann::json{{"k", report.k},
                          {"similarity", report.similarity},
                          {"seed", report.seed},
                          {"oracle", report.oracle_id},
                          {"image_set", report.image_set_id}};
}

}  // namespace csm
