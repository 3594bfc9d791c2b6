#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emochain/chain.hpp"
#include "emochain/corpus.hpp"

namespace emochain::synth {

struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;
};

struct MixtureComponent {
  double mean = 0.0;
  double std = 0.0;
  double weight = 1.0;
};

/// Recipe for a deterministic synthetic dataset. Sentiments are drawn from
/// the mixture, clamped to [-1, 1], and written as precomputed values so the
/// chain math can be checked in isolation from the scorer.
struct SynthSpec {
  std::string topic = "synthetic";
  std::string platform = "synthetic";
  std::int64_t num_posts = 0;
  double no_comment_fraction = 0.0;
  double celebrity_fraction = 0.0;
  IntRange first_level_comments_per_post{0, 0};
  double second_level_fraction = 0.0;   // chance a first-level comment gets replies
  IntRange second_level_replies{1, 2};  // reply count when it does
  std::vector<MixtureComponent> emotion_mixture{{0.0, 0.5, 1.0}};
  IntRange follower_range{0, 1000};
  IntRange like_range{0, 20};
  IntRange repost_range{0, 10};
  std::uint64_t seed = 0;
};

/// Throws config_error on out-of-range fractions, empty ranges, or mixture
/// weights that do not sum to 1.
void validate_spec(const SynthSpec& spec);

SynthSpec load_spec(const std::string& path);

/// Realized counts recorded during generation.
struct TruthSummary {
  std::uint64_t seed = 0;
  std::string topic;
  std::string platform;
  std::size_t posts = 0;
  std::size_t posts_without_comments = 0;
  std::size_t celebrity_posts = 0;
  std::size_t first_level_comments = 0;
  std::size_t second_level_comments = 0;
  std::size_t accounts = 0;
  double mean_sentiment = 0.0;  // over all generated posts and comments
};

std::string truth_to_json(const TruthSummary& truth);

struct Generated {
  corpus::InteractionDataset dataset;
  TruthSummary truth;
};

/// Pure function of the spec (which includes the seed): the same spec yields
/// a byte-identical dataset. Generation is SplitMix64-driven with a fixed
/// draw order; see the implementation for the exact sequence.
Generated generate(const SynthSpec& spec);

struct OraclePostValue {
  std::string post_id;
  double value = 0.0;
};

struct OracleResult {
  std::vector<OraclePostValue> posts;  // ascending post id
  std::optional<double> topic_value;
};

/// Straight-line re-derivation of every post and topic group emotion from the
/// raw records and the definitional formulas. Shares no computation code with
/// the chain module. Deliberately naive: refuses datasets with more than 200
/// comments.
OracleResult oracle_recompute(const corpus::InteractionDataset& ds,
                              const chain::ChainConfig& config);

}  // namespace emochain::synth
