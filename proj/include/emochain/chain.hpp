#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emochain/corpus.hpp"

namespace emochain::chain {

/// Weights of the trust components: cohesion, authority, follower influence,
/// repost influence. Must sum to 1 within 1e-9.
struct TrustWeights {
  double a1 = 0.35;
  double a2 = 0.35;
  double a3_fan = 0.05;
  double a3_repost = 0.25;

  bool operator==(const TrustWeights&) const = default;
};

/// Throws config_error when the weights are negative or do not sum to 1.
void validate_weights(const TrustWeights& w);

struct ChainConfig {
  TrustWeights trust_weights;
  double macro_weight = 0.6;  // share of the macro cluster in post aggregation
  double outlier_k = 2.0;     // std multiples for authority outlier exclusion

  bool operator==(const ChainConfig&) const = default;
};

/// A post plus its first-level feedback. Posts without first-level comments
/// form no cluster.
struct MacroCluster {
  std::size_t post_index = 0;               // into dataset.posts
  std::vector<std::size_t> member_indices;  // first-level comments, id order
  std::int64_t ind = 0;                     // member count + post like count
};

/// A first-level comment plus its second-level feedback.
struct MicroCluster {
  std::size_t root_index = 0;               // first-level comment
  std::vector<std::size_t> member_indices;  // second-level comments, id order
  std::int64_t ind = 0;                     // member count + root like count
};

/// Macro clusters ascending by post id; micros[i] holds the micro clusters
/// under macros[i], ascending by root comment id.
struct ClusterSet {
  std::vector<MacroCluster> macros;
  std::vector<std::vector<MicroCluster>> micros;
};

ClusterSet build_clusters(const corpus::InteractionDataset& ds);

/// The (D, T, E) triple and their product for one cluster.
struct ClusterEmotion {
  double density = 0;       // D in (0, 1]
  double trust = 0;         // T in [0, 1]
  double mean_emotion = 0;  // E in [-1, 1]
  double value = 0;         // D * T * E
  double t1 = 0;
  double t2 = 0;
  double t3_fan = 0;
  double t3_repost = 0;
};

struct PostGroupEmotion {
  std::string post_id;
  ClusterEmotion macro;
  std::vector<ClusterEmotion> micros;
  double value = 0;  // in [-1, 1]
};

/// D = ind / max_ind. Requires 1 <= ind <= max_ind.
double compute_density(std::int64_t ind, std::int64_t max_ind);

/// T1 = 1 - population std of the member emotions, clamped to [0, 1].
double compute_cohesion(std::span<const double> emotions);

/// T2: population std after dropping outliers whose deviation from the mean
/// reaches outlier_k stds (boundary counts as an outlier, with 1e-12 absolute
/// slack for roundoff). Fewer than two survivors means T2 = 1.
double compute_authority(std::span<const double> emotions, double outlier_k);

/// (T3_fan, T3_repost): counts normalized by the scope maxima; a zero maximum
/// normalizes to 0, not NaN.
std::pair<double, double> compute_influence(std::int64_t follower_count,
                                            std::int64_t repost_count,
                                            std::int64_t max_followers,
                                            std::int64_t max_reposts);

/// T = a1*T1 + a2*T2 + a3_fan*T3_fan + a3_repost*T3_repost.
double compute_trust(double t1, double t2, double t3_fan, double t3_repost,
                     const TrustWeights& w);

/// E: arithmetic mean of the member emotions.
double compute_mean_emotion(std::span<const double> emotions);

/// Normalization scope shared by sibling clusters of one level.
struct Scope {
  std::int64_t max_ind = 1;
  std::int64_t max_followers = 0;
  std::int64_t max_reposts = 0;
};

/// Scope over all macro clusters of the dataset (post-author followers, post
/// repost counts).
Scope macro_scope(const corpus::InteractionDataset& ds,
                  std::span<const MacroCluster> macros);

/// Scope over sibling micro clusters under one post (root-author followers;
/// comments carry no repost counts, so max_reposts stays 0).
Scope micro_scope(const corpus::InteractionDataset& ds,
                  std::span<const MicroCluster> siblings);

ClusterEmotion compute_macro_emotion(const corpus::InteractionDataset& ds,
                                     const MacroCluster& cluster,
                                     const Scope& scope,
                                     const ChainConfig& config);

ClusterEmotion compute_micro_emotion(const corpus::InteractionDataset& ds,
                                     const MicroCluster& cluster,
                                     const Scope& scope,
                                     const ChainConfig& config);

/// Post value: the macro value when no micro clusters exist, otherwise
/// w_m * macro + (1 - w_m) * density-weighted mean of the micro values.
PostGroupEmotion aggregate_post_emotion(std::string post_id,
                                        const ClusterEmotion& macro,
                                        std::vector<ClusterEmotion> micros,
                                        const ChainConfig& config);

/// Topic value: mean of the post values in input order; empty -> nullopt
/// (reported as "no clusters", never 0).
std::optional<double> aggregate_topic_emotion(
    std::span<const PostGroupEmotion> posts);

struct ChainResult {
  ClusterSet clusters;
  std::vector<PostGroupEmotion> posts;  // ascending post id
  std::optional<double> topic_value;
};

/// Full chain pass over one dataset. Requires sentiments resolved on every
/// comment that belongs to a cluster.
ChainResult compute_chain(const corpus::InteractionDataset& ds,
                          const ChainConfig& config);

}  // namespace emochain::chain
