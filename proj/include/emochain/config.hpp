#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "emochain/chain.hpp"
#include "emochain/corpus.hpp"

namespace emochain::config {

struct EngineConfig {
  chain::ChainConfig chain_defaults;
  std::map<std::string, chain::ChainConfig> platform_overrides;
  std::vector<corpus::PlatformProfile> profiles;
  bool skewness_adjusted = true;
};

/// Loads the engine config (JSON). `trust_weights` is required; macro_weight,
/// outlier_k, skewness_adjusted, platform_overrides and profiles are
/// optional. Overrides are resolved against the defaults and revalidated.
EngineConfig load_config(const std::string& path);

/// Chain parameters effective for one platform (override or defaults).
const chain::ChainConfig& config_for_platform(const EngineConfig& cfg,
                                              std::string_view platform);

/// Profile for a platform, or nullptr when none is configured.
const corpus::PlatformProfile* profile_for_platform(const EngineConfig& cfg,
                                                    std::string_view platform);

}  // namespace emochain::config
