#pragma once

#include <memory>

#include "csm/cli/run_config.hpp"
#include "csm/oracle.hpp"

namespace csm::cli {

/// Builds the oracle named by the config: HttpOracle for oracle_url, else a
/// local adapter from the oracle spec string "kind:key=val,...".
///
/// Kinds (all take w=,h=,ch=):
///   constant: c=<value>
///   mean
///   disk:     cx=,cy=,r=
///   flatten   (embeddings = raw pixels)
///   mlp:      hidden=<a-b-...>, classes=, seed=   (randomizable fixture)
std::unique_ptr<ConfidenceOracle> make_oracle(const RunConfig& config);

}  // namespace csm::cli
