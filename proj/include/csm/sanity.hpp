#pragma once

#include <cstdint>

#include <nlohmann/json_fwd.hpp>

#include "csm/canonical.hpp"
#include "csm/correspondence.hpp"
#include "csm/image.hpp"
#include "csm/oracle.hpp"

namespace csm {

/// Pearson correlation of the flattened maps, 0 when either map is constant.
/// Bitwise-identical maps return exactly 1.0.
double map_similarity(const SaliencyMap& a, const SaliencyMap& b);

struct SanityInput {
    FaceImage image;
    DenseCorrespondence corr;
    int class_id;
};

struct SanityReport {
    std::vector<int> k;              // 0..K
    std::vector<double> similarity;  // similarity(CMS_original, CMS_randomized_k)
    std::uint64_t seed = 0;
    std::string oracle_id;
    std::string image_set_id;
};

/// Progressive layer-randomization check: CMS with the intact oracle, then
/// with randomize_top_layers(k) for k = 1..K, recording map similarities.
/// Per-k randomization seeds derive deterministically from `seed`.
SanityReport sanity_check(const ConfidenceOracle& oracle, std::span<const SanityInput> inputs,
                          int canonical_width, int canonical_height, const OcclusionSpec& spec,
                          int K, std::uint64_t seed, int workers = 1,
                          const std::string& image_set_id = "");

nlohmann::json sanity_report_json(const SanityReport& report);

}  // namespace csm
