#include "emochain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "emochain/errors.hpp"

namespace emochain::chain {

namespace {

// Boundary slack for the outlier rule: a deviation exactly at k*sigma is an
// outlier, and roundoff must not flip that decision.
constexpr double kOutlierSlack = 1e-12;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double mean_of(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_std(std::span<const double> values, double mean) {
  double sq = 0.0;
  for (double v : values) {
    const double d = v - mean;
    sq += d * d;
  }
  return std::sqrt(sq / static_cast<double>(values.size()));
}

double sentiment_or_throw(const corpus::Comment& c) {
  if (!c.sentiment)
    throw contract_error("sentiment not resolved for comment '" + c.id + "'");
  return *c.sentiment;
}

const corpus::Account& author_or_throw(const corpus::InteractionDataset& ds,
                                       const std::string& account_id) {
  const corpus::Account* a = ds.find_account(account_id);
  if (!a) throw contract_error("unresolved author account '" + account_id + "'");
  return *a;
}

ClusterEmotion assemble(double density, std::span<const double> emotions,
                        std::int64_t followers, std::int64_t reposts,
                        const Scope& scope, const ChainConfig& config) {
  ClusterEmotion ce;
  ce.density = density;
  ce.t1 = compute_cohesion(emotions);
  ce.t2 = compute_authority(emotions, config.outlier_k);
  std::tie(ce.t3_fan, ce.t3_repost) = compute_influence(
      followers, reposts, scope.max_followers, scope.max_reposts);
  ce.trust = compute_trust(ce.t1, ce.t2, ce.t3_fan, ce.t3_repost,
                           config.trust_weights);
  ce.mean_emotion = compute_mean_emotion(emotions);
  ce.value = ce.density * ce.trust * ce.mean_emotion;
  return ce;
}

}  // namespace

void validate_weights(const TrustWeights& w) {
  const bool nonneg = w.a1 >= 0 && w.a2 >= 0 && w.a3_fan >= 0 && w.a3_repost >= 0;
  const double sum = w.a1 + w.a2 + w.a3_fan + w.a3_repost;
  if (!nonneg || std::abs(sum - 1.0) > 1e-9)
    throw config_error("trust weights must be non-negative and sum to 1");
}

ClusterSet build_clusters(const corpus::InteractionDataset& ds) {
  // Comments are sorted by id, so grouped member lists stay in id order.
  std::unordered_map<std::string, std::vector<std::size_t>> first_by_post;
  std::unordered_map<std::string, std::vector<std::size_t>> second_by_comment;
  for (std::size_t i = 0; i < ds.comments.size(); ++i) {
    const corpus::Comment& c = ds.comments[i];
    if (c.is_second_level())
      second_by_comment[*c.parent_comment_id].push_back(i);
    else
      first_by_post[c.parent_post_id].push_back(i);
  }

  ClusterSet set;
  for (std::size_t pi = 0; pi < ds.posts.size(); ++pi) {
    auto members = first_by_post.find(ds.posts[pi].id);
    if (members == first_by_post.end() || members->second.empty())
      continue;  // a post without comments forms no group

    MacroCluster macro;
    macro.post_index = pi;
    macro.member_indices = members->second;
    macro.ind = static_cast<std::int64_t>(macro.member_indices.size()) +
                ds.posts[pi].like_count;

    std::vector<MicroCluster> micros;
    for (std::size_t ci : macro.member_indices) {
      auto replies = second_by_comment.find(ds.comments[ci].id);
      if (replies == second_by_comment.end() || replies->second.empty())
        continue;
      MicroCluster micro;
      micro.root_index = ci;
      micro.member_indices = replies->second;
      micro.ind = static_cast<std::int64_t>(micro.member_indices.size()) +
                  ds.comments[ci].like_count;
      micros.push_back(std::move(micro));
    }
    set.macros.push_back(std::move(macro));
    set.micros.push_back(std::move(micros));
  }
  return set;
}

double compute_density(std::int64_t ind, std::int64_t max_ind) {
  if (ind < 1 || max_ind < ind)
    throw contract_error("density requires 1 <= ind <= max_ind");
  return static_cast<double>(ind) / static_cast<double>(max_ind);
}

double compute_cohesion(std::span<const double> emotions) {
  if (emotions.empty()) throw contract_error("cohesion of an empty cluster");
  const double sigma = population_std(emotions, mean_of(emotions));
  return clamp01(1.0 - sigma);
}

double compute_authority(std::span<const double> emotions, double outlier_k) {
  if (emotions.empty()) throw contract_error("authority of an empty cluster");
  const double mu = mean_of(emotions);
  const double sigma = population_std(emotions, mu);
  std::vector<double> kept;
  kept.reserve(emotions.size());
  const double threshold = outlier_k * sigma;
  for (double e : emotions) {
    if (std::abs(e - mu) + kOutlierSlack < threshold) kept.push_back(e);
  }
  if (kept.size() < 2) return 1.0;  // no measurable bifurcation left
  const double sigma_kept = population_std(kept, mean_of(kept));
  return clamp01(1.0 - sigma_kept);
}

std::pair<double, double> compute_influence(std::int64_t follower_count,
                                            std::int64_t repost_count,
                                            std::int64_t max_followers,
                                            std::int64_t max_reposts) {
  if (follower_count < 0 || repost_count < 0 ||
      max_followers < follower_count || max_reposts < repost_count)
    throw contract_error("influence requires 0 <= count <= scope maximum");
  const double fan = static_cast<double>(follower_count) /
                     static_cast<double>(std::max<std::int64_t>(1, max_followers));
  const double repost = static_cast<double>(repost_count) /
                        static_cast<double>(std::max<std::int64_t>(1, max_reposts));
  return {fan, repost};
}

double compute_trust(double t1, double t2, double t3_fan, double t3_repost,
                     const TrustWeights& w) {
  validate_weights(w);
  return w.a1 * t1 + w.a2 * t2 + w.a3_fan * t3_fan + w.a3_repost * t3_repost;
}

double compute_mean_emotion(std::span<const double> emotions) {
  if (emotions.empty()) throw contract_error("mean emotion of an empty cluster");
  return mean_of(emotions);
}

Scope macro_scope(const corpus::InteractionDataset& ds,
                  std::span<const MacroCluster> macros) {
  Scope scope;
  for (const MacroCluster& m : macros) {
    const corpus::Post& post = ds.posts[m.post_index];
    scope.max_ind = std::max(scope.max_ind, m.ind);
    scope.max_followers = std::max(
        scope.max_followers, author_or_throw(ds, post.author_id).follower_count);
    scope.max_reposts = std::max(scope.max_reposts, post.repost_count);
  }
  return scope;
}

Scope micro_scope(const corpus::InteractionDataset& ds,
                  std::span<const MicroCluster> siblings) {
  Scope scope;
  for (const MicroCluster& m : siblings) {
    const corpus::Comment& root = ds.comments[m.root_index];
    scope.max_ind = std::max(scope.max_ind, m.ind);
    scope.max_followers = std::max(
        scope.max_followers, author_or_throw(ds, root.author_id).follower_count);
  }
  return scope;
}

ClusterEmotion compute_macro_emotion(const corpus::InteractionDataset& ds,
                                     const MacroCluster& cluster,
                                     const Scope& scope,
                                     const ChainConfig& config) {
  std::vector<double> emotions;
  emotions.reserve(cluster.member_indices.size());
  for (std::size_t ci : cluster.member_indices)
    emotions.push_back(sentiment_or_throw(ds.comments[ci]));
  const corpus::Post& post = ds.posts[cluster.post_index];
  const corpus::Account& author = author_or_throw(ds, post.author_id);
  return assemble(compute_density(cluster.ind, scope.max_ind), emotions,
                  author.follower_count, post.repost_count, scope, config);
}

ClusterEmotion compute_micro_emotion(const corpus::InteractionDataset& ds,
                                     const MicroCluster& cluster,
                                     const Scope& scope,
                                     const ChainConfig& config) {
  std::vector<double> emotions;
  emotions.reserve(cluster.member_indices.size());
  for (std::size_t ci : cluster.member_indices)
    emotions.push_back(sentiment_or_throw(ds.comments[ci]));
  const corpus::Comment& root = ds.comments[cluster.root_index];
  const corpus::Account& author = author_or_throw(ds, root.author_id);
  return assemble(compute_density(cluster.ind, scope.max_ind), emotions,
                  author.follower_count, /*reposts=*/0, scope, config);
}

PostGroupEmotion aggregate_post_emotion(std::string post_id,
                                        const ClusterEmotion& macro,
                                        std::vector<ClusterEmotion> micros,
                                        const ChainConfig& config) {
  PostGroupEmotion out;
  out.post_id = std::move(post_id);
  out.macro = macro;
  out.micros = std::move(micros);
  if (out.micros.empty()) {
    out.value = macro.value;
    return out;
  }
  double weighted = 0.0;
  double total_density = 0.0;
  for (const ClusterEmotion& m : out.micros) {
    weighted += m.density * m.value;
    total_density += m.density;
  }
  const double micro_mean = weighted / total_density;  // every D > 0
  const double wm = config.macro_weight;
  out.value = wm * macro.value + (1.0 - wm) * micro_mean;
  return out;
}

std::optional<double> aggregate_topic_emotion(
    std::span<const PostGroupEmotion> posts) {
  if (posts.empty()) return std::nullopt;
  double sum = 0.0;
  for (const PostGroupEmotion& p : posts) sum += p.value;
  return sum / static_cast<double>(posts.size());
}

ChainResult compute_chain(const corpus::InteractionDataset& ds,
                          const ChainConfig& config) {
  validate_weights(config.trust_weights);
  ChainResult result;
  result.clusters = build_clusters(ds);
  const Scope mscope = macro_scope(ds, result.clusters.macros);
  for (std::size_t i = 0; i < result.clusters.macros.size(); ++i) {
    const MacroCluster& macro = result.clusters.macros[i];
    const ClusterEmotion macro_ce =
        compute_macro_emotion(ds, macro, mscope, config);
    const auto& siblings = result.clusters.micros[i];
    const Scope uscope = micro_scope(ds, siblings);
    std::vector<ClusterEmotion> micro_ces;
    micro_ces.reserve(siblings.size());
    for (const MicroCluster& micro : siblings)
      micro_ces.push_back(compute_micro_emotion(ds, micro, uscope, config));
    result.posts.push_back(aggregate_post_emotion(
        ds.posts[macro.post_index].id, macro_ce, std::move(micro_ces), config));
  }
  result.topic_value = aggregate_topic_emotion(result.posts);
  return result;
}

}  // namespace emochain::chain
