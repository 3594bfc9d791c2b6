#include "emochain/config.hpp"

#include <fstream>

#include <json.hpp>

#include "emochain/errors.hpp"

namespace emochain::config {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& where,
                      const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number())
    throw config_error("config: " + where + " needs numeric key '" + key + "'");
  return it->get<double>();
}

chain::TrustWeights parse_weights(const json& j, const std::string& where) {
  chain::TrustWeights w;
  w.a1 = require_number(j, where, "a1");
  w.a2 = require_number(j, where, "a2");
  w.a3_fan = require_number(j, where, "a3_fan");
  w.a3_repost = require_number(j, where, "a3_repost");
  return w;
}

// Partial override: absent keys keep the base value.
chain::ChainConfig parse_chain(const json& j, const chain::ChainConfig& base,
                               const std::string& where, bool require_weights) {
  chain::ChainConfig out = base;
  if (auto it = j.find("trust_weights"); it != j.end()) {
    if (!it->is_object())
      throw config_error("config: " + where + ".trust_weights must be an object");
    out.trust_weights = parse_weights(*it, where + ".trust_weights");
  } else if (require_weights) {
    throw config_error("config: missing required key 'trust_weights'");
  }
  if (j.contains("macro_weight"))
    out.macro_weight = require_number(j, where, "macro_weight");
  if (j.contains("outlier_k"))
    out.outlier_k = require_number(j, where, "outlier_k");
  chain::validate_weights(out.trust_weights);
  if (!(out.macro_weight >= 0.0 && out.macro_weight <= 1.0))
    throw config_error("config: " + where + ".macro_weight must be in [0, 1]");
  if (!(out.outlier_k > 0.0))
    throw config_error("config: " + where + ".outlier_k must be > 0");
  return out;
}

corpus::PlatformProfile parse_profile(const json& j) {
  corpus::PlatformProfile p;
  if (!j.contains("platform") || !j["platform"].is_string())
    throw config_error("config: profile entry needs a 'platform' string");
  p.platform = j["platform"].get<std::string>();
  const std::string where = "profiles[" + p.platform + "]";
  auto obj = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end() || !it->is_object())
      throw config_error("config: " + where + " needs object key '" + key + "'");
    return *it;
  };
  const json& edu = obj("education_shares");
  p.education_shares.junior_high_or_below =
      require_number(edu, where, "junior_high_or_below");
  p.education_shares.senior_high = require_number(edu, where, "senior_high");
  p.education_shares.bachelor_or_above =
      require_number(edu, where, "bachelor_or_above");
  const json& age = obj("age_shares");
  p.age_shares.le25 = require_number(age, where, "le25");
  p.age_shares.a26_35 = require_number(age, where, "a26_35");
  p.age_shares.ge36 = require_number(age, where, "ge36");
  if (j.contains("repost_is_internal")) {
    if (!j["repost_is_internal"].is_boolean())
      throw config_error("config: " + where + ".repost_is_internal must be a bool");
    p.repost_is_internal = j["repost_is_internal"].get<bool>();
  }
  return corpus::validate_profile(std::move(p));
}

}  // namespace

EngineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open config file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw config_error("config file is not a JSON object: " + path);

  EngineConfig cfg;
  cfg.chain_defaults = parse_chain(j, chain::ChainConfig{}, "config",
                                   /*require_weights=*/true);
  if (auto it = j.find("skewness_adjusted"); it != j.end()) {
    if (!it->is_boolean())
      throw config_error("config: skewness_adjusted must be a bool");
    cfg.skewness_adjusted = it->get<bool>();
  }
  if (auto it = j.find("platform_overrides"); it != j.end()) {
    if (!it->is_object())
      throw config_error("config: platform_overrides must be an object");
    for (auto& [platform, override_json] : it->items()) {
      cfg.platform_overrides[platform] =
          parse_chain(override_json, cfg.chain_defaults,
                      "platform_overrides." + platform,
                      /*require_weights=*/false);
    }
  }
  if (auto it = j.find("profiles"); it != j.end()) {
    if (!it->is_array())
      throw config_error("config: profiles must be an array");
    for (const json& entry : *it) cfg.profiles.push_back(parse_profile(entry));
  }
  return cfg;
}

const chain::ChainConfig& config_for_platform(const EngineConfig& cfg,
                                              std::string_view platform) {
  auto it = cfg.platform_overrides.find(std::string(platform));
  return it == cfg.platform_overrides.end() ? cfg.chain_defaults : it->second;
}

const corpus::PlatformProfile* profile_for_platform(const EngineConfig& cfg,
                                                    std::string_view platform) {
  for (const corpus::PlatformProfile& p : cfg.profiles)
    if (p.platform == platform) return &p;
  return nullptr;
}

}  // namespace emochain::config
