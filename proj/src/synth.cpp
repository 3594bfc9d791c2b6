#include "emochain/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "emochain/errors.hpp"
#include "emochain/rng.hpp"

namespace emochain::synth {

namespace {

using nlohmann::json;

std::string padded(const char* prefix, std::int64_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*lld", prefix, width,
                static_cast<long long>(n));
  return buf;
}

double draw_mixture(SplitMix64& rng, const std::vector<MixtureComponent>& mix) {
  const double u = rng.next_unit();
  double cumulative = 0.0;
  const MixtureComponent* chosen = &mix.back();
  for (const MixtureComponent& c : mix) {
    cumulative += c.weight;
    if (u < cumulative) {
      chosen = &c;
      break;
    }
  }
  const double value = chosen->mean + chosen->std * rng.next_normal();
  return std::min(1.0, std::max(-1.0, value));
}

IntRange parse_range(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("min") || !j.contains("max") ||
      !j["min"].is_number_integer() || !j["max"].is_number_integer())
    throw config_error("synth spec: " + where + " must be {min, max} integers");
  return {j["min"].get<std::int64_t>(), j["max"].get<std::int64_t>()};
}

}  // namespace

void validate_spec(const SynthSpec& spec) {
  auto fraction_ok = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (spec.num_posts < 0)
    throw config_error("synth spec: num_posts must be >= 0");
  if (!fraction_ok(spec.no_comment_fraction) ||
      !fraction_ok(spec.celebrity_fraction) ||
      !fraction_ok(spec.second_level_fraction))
    throw config_error("synth spec: fractions must lie in [0, 1]");
  for (const IntRange& r :
       {spec.first_level_comments_per_post, spec.second_level_replies,
        spec.follower_range, spec.like_range, spec.repost_range}) {
    if (r.max < r.min || r.min < 0)
      throw config_error("synth spec: ranges must satisfy 0 <= min <= max");
  }
  if (spec.emotion_mixture.empty())
    throw config_error("synth spec: emotion_mixture must be non-empty");
  double weight_sum = 0.0;
  for (const MixtureComponent& c : spec.emotion_mixture) {
    if (c.std < 0.0 || c.weight < 0.0)
      throw config_error("synth spec: mixture std and weight must be >= 0");
    weight_sum += c.weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9)
    throw config_error("synth spec: mixture weights must sum to 1");
}

SynthSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open synth spec: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw config_error("synth spec is not a JSON object: " + path);
  SynthSpec spec;
  if (j.contains("topic")) spec.topic = j["topic"].get<std::string>();
  if (j.contains("platform")) spec.platform = j["platform"].get<std::string>();
  if (j.contains("num_posts")) spec.num_posts = j["num_posts"].get<std::int64_t>();
  if (j.contains("no_comment_fraction"))
    spec.no_comment_fraction = j["no_comment_fraction"].get<double>();
  if (j.contains("celebrity_fraction"))
    spec.celebrity_fraction = j["celebrity_fraction"].get<double>();
  if (j.contains("first_level_comments_per_post"))
    spec.first_level_comments_per_post =
        parse_range(j["first_level_comments_per_post"],
                    "first_level_comments_per_post");
  if (j.contains("second_level_fraction"))
    spec.second_level_fraction = j["second_level_fraction"].get<double>();
  if (j.contains("second_level_replies"))
    spec.second_level_replies =
        parse_range(j["second_level_replies"], "second_level_replies");
  if (j.contains("emotion_mixture")) {
    spec.emotion_mixture.clear();
    for (const json& c : j["emotion_mixture"]) {
      MixtureComponent mc;
      mc.mean = c.at("mean").get<double>();
      mc.std = c.at("std").get<double>();
      mc.weight = c.at("weight").get<double>();
      spec.emotion_mixture.push_back(mc);
    }
  }
  if (j.contains("follower_range"))
    spec.follower_range = parse_range(j["follower_range"], "follower_range");
  if (j.contains("like_range"))
    spec.like_range = parse_range(j["like_range"], "like_range");
  if (j.contains("repost_range"))
    spec.repost_range = parse_range(j["repost_range"], "repost_range");
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  validate_spec(spec);
  return spec;
}

std::string truth_to_json(const TruthSummary& truth) {
  nlohmann::ordered_json j{{"seed", truth.seed},
                           {"topic", truth.topic},
                           {"platform", truth.platform},
                           {"posts", truth.posts},
                           {"posts_without_comments", truth.posts_without_comments},
                           {"celebrity_posts", truth.celebrity_posts},
                           {"first_level_comments", truth.first_level_comments},
                           {"second_level_comments", truth.second_level_comments},
                           {"accounts", truth.accounts},
                           {"mean_sentiment", truth.mean_sentiment}};
  return j.dump(2) + "\n";
}

Generated generate(const SynthSpec& spec) {
  validate_spec(spec);
  SplitMix64 rng(spec.seed);
  Generated out;
  corpus::InteractionDataset& ds = out.dataset;
  TruthSummary& truth = out.truth;
  ds.topic = truth.topic = spec.topic;
  ds.platform = truth.platform = spec.platform;
  truth.seed = spec.seed;

  double sentiment_sum = 0.0;
  std::size_t sentiment_count = 0;
  auto draw_sentiment = [&] {
    const double s = draw_mixture(rng, spec.emotion_mixture);
    sentiment_sum += s;
    ++sentiment_count;
    return s;
  };

  std::int64_t commenter_seq = 0;
  auto make_commenter = [&]() -> std::string {
    corpus::Account a;
    a.id = padded("u", commenter_seq++, 6);
    a.follower_count = rng.next_int(spec.follower_range.min, spec.follower_range.max);
    ds.accounts.push_back(a);
    return ds.accounts.back().id;
  };

  // Draw order per post: author celebrity flag, author followers, post likes,
  // post reposts, post sentiment, the no-comment coin, then per first-level
  // comment: author followers, likes, sentiment, reply coin, and per reply:
  // author followers, likes, sentiment.
  for (std::int64_t i = 0; i < spec.num_posts; ++i) {
    corpus::Account author;
    author.id = padded("a", i, 6);
    author.is_celebrity = rng.next_unit() < spec.celebrity_fraction;
    author.follower_count =
        rng.next_int(spec.follower_range.min, spec.follower_range.max);
    ds.accounts.push_back(author);
    if (author.is_celebrity) ++truth.celebrity_posts;

    corpus::Post post;
    post.id = padded("p", i, 6);
    post.author_id = author.id;
    post.topic = spec.topic;
    post.platform = spec.platform;
    post.text = "synthetic post " + std::to_string(i);
    post.like_count = rng.next_int(spec.like_range.min, spec.like_range.max);
    post.repost_count = rng.next_int(spec.repost_range.min, spec.repost_range.max);
    post.sentiment = draw_sentiment();

    const bool no_comments = rng.next_unit() < spec.no_comment_fraction;
    std::int64_t n_first = 0;
    if (!no_comments)
      n_first = rng.next_int(spec.first_level_comments_per_post.min,
                             spec.first_level_comments_per_post.max);
    if (n_first == 0) ++truth.posts_without_comments;

    for (std::int64_t j = 0; j < n_first; ++j) {
      corpus::Comment c1;
      c1.id = post.id + padded("_c", j, 3);
      c1.parent_post_id = post.id;
      c1.author_id = make_commenter();
      c1.text = "reply";
      c1.like_count = rng.next_int(spec.like_range.min, spec.like_range.max);
      c1.sentiment = draw_sentiment();
      const bool has_replies = rng.next_unit() < spec.second_level_fraction;
      const std::string parent_id = c1.id;
      ds.comments.push_back(std::move(c1));
      ++truth.first_level_comments;
      if (!has_replies) continue;
      const std::int64_t n_second = rng.next_int(
          spec.second_level_replies.min, spec.second_level_replies.max);
      for (std::int64_t k = 0; k < n_second; ++k) {
        corpus::Comment c2;
        c2.id = parent_id + padded("_r", k, 2);
        c2.parent_post_id = post.id;
        c2.parent_comment_id = parent_id;
        c2.author_id = make_commenter();
        c2.text = "reply";
        c2.like_count = rng.next_int(spec.like_range.min, spec.like_range.max);
        c2.sentiment = draw_sentiment();
        ds.comments.push_back(std::move(c2));
        ++truth.second_level_comments;
      }
    }
    ds.posts.push_back(std::move(post));
  }

  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(ds.accounts.begin(), ds.accounts.end(), by_id);
  std::sort(ds.posts.begin(), ds.posts.end(), by_id);
  std::sort(ds.comments.begin(), ds.comments.end(), by_id);

  truth.posts = ds.posts.size();
  truth.accounts = ds.accounts.size();
  truth.mean_sentiment =
      sentiment_count == 0 ? 0.0
                           : sentiment_sum / static_cast<double>(sentiment_count);
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracle. Everything below recomputes the group emotion values
// from first principles with plain loops and local helpers; it must not call
// into the chain module.

namespace {

double oracle_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double oracle_pop_std(const std::vector<double>& v) {
  const double mu = oracle_mean(v);
  double sq = 0.0;
  for (double x : v) sq += (x - mu) * (x - mu);
  return std::sqrt(sq / static_cast<double>(v.size()));
}

double oracle_clamp01(double x) {
  if (x < 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  return x;
}

double oracle_cohesion(const std::vector<double>& emotions) {
  return oracle_clamp01(1.0 - oracle_pop_std(emotions));
}

double oracle_authority(const std::vector<double>& emotions, double k) {
  const double mu = oracle_mean(emotions);
  const double sigma = oracle_pop_std(emotions);
  std::vector<double> kept;
  for (double e : emotions) {
    // boundary deviations count as outliers, 1e-12 slack for roundoff
    if (std::abs(e - mu) + 1e-12 < k * sigma) kept.push_back(e);
  }
  if (kept.size() < 2) return 1.0;
  return oracle_clamp01(1.0 - oracle_pop_std(kept));
}

std::int64_t oracle_followers(const corpus::InteractionDataset& ds,
                              const std::string& account_id) {
  for (const corpus::Account& a : ds.accounts)
    if (a.id == account_id) return a.follower_count;
  throw contract_error("oracle: unresolved account '" + account_id + "'");
}

}  // namespace

OracleResult oracle_recompute(const corpus::InteractionDataset& ds,
                              const chain::ChainConfig& config) {
  if (ds.comments.size() > 200)
    throw contract_error("oracle guard: dataset exceeds 200 comments");
  chain::validate_weights(config.trust_weights);
  const chain::TrustWeights& w = config.trust_weights;
  const double k = config.outlier_k;

  // Posts are sorted by id; keep that order throughout.
  struct PostChain {
    const corpus::Post* post = nullptr;
    std::vector<const corpus::Comment*> level1;
    std::int64_t ind = 0;
  };
  std::vector<PostChain> chains;
  for (const corpus::Post& post : ds.posts) {
    PostChain pc;
    pc.post = &post;
    for (const corpus::Comment& c : ds.comments)
      if (!c.is_second_level() && c.parent_post_id == post.id)
        pc.level1.push_back(&c);
    if (pc.level1.empty()) continue;
    pc.ind = static_cast<std::int64_t>(pc.level1.size()) + post.like_count;
    chains.push_back(std::move(pc));
  }

  std::int64_t max_ind = 1, max_fans = 0, max_reposts = 0;
  for (const PostChain& pc : chains) {
    max_ind = std::max(max_ind, pc.ind);
    max_fans = std::max(max_fans, oracle_followers(ds, pc.post->author_id));
    max_reposts = std::max(max_reposts, pc.post->repost_count);
  }

  OracleResult result;
  double post_value_sum = 0.0;
  for (const PostChain& pc : chains) {
    std::vector<double> emotions;
    for (const corpus::Comment* c : pc.level1) emotions.push_back(*c->sentiment);

    const double d = static_cast<double>(pc.ind) / static_cast<double>(max_ind);
    const double t1 = oracle_cohesion(emotions);
    const double t2 = oracle_authority(emotions, k);
    const double t3f =
        static_cast<double>(oracle_followers(ds, pc.post->author_id)) /
        static_cast<double>(std::max<std::int64_t>(1, max_fans));
    const double t3r = static_cast<double>(pc.post->repost_count) /
                       static_cast<double>(std::max<std::int64_t>(1, max_reposts));
    const double trust = w.a1 * t1 + w.a2 * t2 + w.a3_fan * t3f + w.a3_repost * t3r;
    const double macro_value = d * trust * oracle_mean(emotions);

    // micro clusters: first-level comments of this post that have replies
    struct Micro {
      const corpus::Comment* root;
      std::vector<const corpus::Comment*> replies;
      std::int64_t ind;
    };
    std::vector<Micro> micros;
    for (const corpus::Comment* root : pc.level1) {
      Micro m{root, {}, 0};
      for (const corpus::Comment& c : ds.comments)
        if (c.is_second_level() && *c.parent_comment_id == root->id)
          m.replies.push_back(&c);
      if (m.replies.empty()) continue;
      m.ind = static_cast<std::int64_t>(m.replies.size()) + root->like_count;
      micros.push_back(std::move(m));
    }

    double post_value = macro_value;
    if (!micros.empty()) {
      std::int64_t micro_max_ind = 1, micro_max_fans = 0;
      for (const Micro& m : micros) {
        micro_max_ind = std::max(micro_max_ind, m.ind);
        micro_max_fans =
            std::max(micro_max_fans, oracle_followers(ds, m.root->author_id));
      }
      double weighted = 0.0, density_sum = 0.0;
      for (const Micro& m : micros) {
        std::vector<double> micro_emotions;
        for (const corpus::Comment* c : m.replies)
          micro_emotions.push_back(*c->sentiment);
        const double md =
            static_cast<double>(m.ind) / static_cast<double>(micro_max_ind);
        const double mt1 = oracle_cohesion(micro_emotions);
        const double mt2 = oracle_authority(micro_emotions, k);
        const double mt3f =
            static_cast<double>(oracle_followers(ds, m.root->author_id)) /
            static_cast<double>(std::max<std::int64_t>(1, micro_max_fans));
        const double mtrust = w.a1 * mt1 + w.a2 * mt2 + w.a3_fan * mt3f;
        const double mvalue = md * mtrust * oracle_mean(micro_emotions);
        weighted += md * mvalue;
        density_sum += md;
      }
      post_value = config.macro_weight * macro_value +
                   (1.0 - config.macro_weight) * (weighted / density_sum);
    }
    result.posts.push_back({pc.post->id, post_value});
    post_value_sum += post_value;
  }
  if (!result.posts.empty())
    result.topic_value =
        post_value_sum / static_cast<double>(result.posts.size());
  return result;
}

}  // namespace emochain::synth
