#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "csm/cli/run_config.hpp"

namespace csm::cli {

/// Orchestration behind the csm subcommands. Each writes its artifacts plus a
/// config_echo.json into config.out and throws csm::Error on failure.

/// <image-stem>.cis.csm + <image-stem>.cis.png
void cmd_cis(const RunConfig& config, const std::filesystem::path& image,
             const std::filesystem::path& dcorr, int class_id);

/// cms.csm + cms.png + convergence.json over the manifest. Per-image failures
/// are reported on stderr and skipped; throws if every image fails.
void cmd_cms(const RunConfig& config);

/// <image-stem>.reproj.csm/.png and <image-stem>.overlay.png
void cmd_reproject(const RunConfig& config, const std::filesystem::path& map_path,
                   const std::filesystem::path& dcorr, const std::filesystem::path& image);

/// report.json with Average Drop %, % Increase in Confidence and Win % for
/// every method directory (files named <image-stem>.csm or <image-stem>.png).
void cmd_evaluate(const RunConfig& config,
                  const std::vector<std::pair<std::string, std::filesystem::path>>& methods);

/// sanity.json: layer-randomization similarity decay for k = 0..K.
void cmd_sanity(const RunConfig& config, int K);

/// mode "canonical" shares the cmd_cms path; "none"/"keypoint" build the
/// sliding-window model saliency map (msm_<mode>.csm/.png).
void cmd_ablate_alignment(const RunConfig& config, const std::string& mode);

}  // namespace csm::cli
