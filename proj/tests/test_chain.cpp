#include <doctest.h>

#include <cmath>
#include <tuple>

#include "emochain/chain.hpp"
#include "emochain/errors.hpp"
#include "emochain/rng.hpp"

using namespace emochain;

namespace {

corpus::Comment make_comment(std::string id, std::string post,
                             std::string author, double sentiment,
                             std::int64_t likes = 0,
                             std::optional<std::string> parent = std::nullopt) {
  corpus::Comment c;
  c.id = std::move(id);
  c.parent_post_id = std::move(post);
  c.parent_comment_id = std::move(parent);
  c.author_id = std::move(author);
  c.like_count = likes;
  c.sentiment = sentiment;
  return c;
}

corpus::Post make_post(std::string id, std::string author,
                       std::int64_t likes = 0, std::int64_t reposts = 0) {
  corpus::Post p;
  p.id = std::move(id);
  p.author_id = std::move(author);
  p.like_count = likes;
  p.repost_count = reposts;
  p.sentiment = 0.0;
  return p;
}

// Two posts, one micro cluster; all cluster values derived by hand:
//   p1: ind 9 (2 comments + 7 likes), D 1, T1 = T2 = 0.8, T3 = (0.5, 1),
//       T 0.835, E 0.4, macro value 0.334; micro under c1: D 1, T 0.75,
//       E -0.4, value -0.3; post value 0.6*0.334 + 0.4*(-0.3) = 0.0804.
//   p2: ind 4, D 4/9, T 0.75, E 0.8, value = post value = 0.26666...
//   topic value = mean = 0.17353...
corpus::InteractionDataset worked_example() {
  corpus::InteractionDataset ds;
  ds.topic = "t";
  ds.platform = "x";
  ds.accounts.push_back({"A", "", 1000, true});
  ds.accounts.push_back({"B", "", 500, false});
  ds.accounts.push_back({"C", "", 100, false});
  ds.accounts.push_back({"D", "", 2000, false});
  ds.accounts.push_back({"E", "", 0, false});
  ds.posts.push_back(make_post("p1", "A", 7, 10));
  ds.posts.push_back(make_post("p2", "D", 3, 0));
  ds.comments.push_back(make_comment("c1", "p1", "B", 0.2, 5));
  ds.comments.push_back(make_comment("c2", "p1", "C", 0.6, 0));
  ds.comments.push_back(make_comment("c3", "p2", "E", 0.8, 1));
  ds.comments.push_back(make_comment("c4", "p1", "D", -0.4, 3, "c1"));
  return ds;
}

}  // namespace

TEST_CASE("build_clusters: ind counts feedback plus likes") {
  corpus::InteractionDataset ds;
  ds.accounts.push_back({"a", "", 0, false});
  ds.posts.push_back(make_post("p1", "a", 7));
  ds.posts.push_back(make_post("p2", "a", 99));  // no comments, no cluster
  for (int i = 0; i < 3; ++i)
    ds.comments.push_back(
        make_comment("c" + std::to_string(i), "p1", "a", 0.0));
  const auto set = chain::build_clusters(ds);
  REQUIRE(set.macros.size() == 1);
  CHECK(ds.posts[set.macros[0].post_index].id == "p1");
  CHECK(set.macros[0].ind == 10);  // 3 comments + 7 likes
  CHECK(set.micros[0].empty());
}

TEST_CASE("build_clusters: micro ind counts replies plus root likes") {
  corpus::InteractionDataset ds;
  ds.accounts.push_back({"a", "", 0, false});
  ds.posts.push_back(make_post("p1", "a"));
  ds.comments.push_back(make_comment("c1", "p1", "a", 0.0, 5));
  ds.comments.push_back(make_comment("c1r1", "p1", "a", 0.0, 0, "c1"));
  ds.comments.push_back(make_comment("c1r2", "p1", "a", 0.0, 0, "c1"));
  const auto set = chain::build_clusters(ds);
  REQUIRE(set.macros.size() == 1);
  REQUIRE(set.micros[0].size() == 1);
  CHECK(set.micros[0][0].ind == 7);  // 2 replies + 5 likes
}

TEST_CASE("compute_density is the in-degree ratio") {
  CHECK(chain::compute_density(10, 10) == 1.0);
  CHECK(chain::compute_density(5, 10) == 0.5);
  CHECK(chain::compute_density(2, 10) == doctest::Approx(0.2));
  CHECK_THROWS_AS(chain::compute_density(0, 10), contract_error);
  CHECK_THROWS_AS(chain::compute_density(11, 10), contract_error);
}

TEST_CASE("density is invariant under integer scaling of a scope") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t max_ind = 1 + static_cast<std::int64_t>(rng.next_below(1000000));
    const std::int64_t ind = 1 + static_cast<std::int64_t>(rng.next_below(
                                     static_cast<std::uint64_t>(max_ind)));
    const std::int64_t k = 1 + static_cast<std::int64_t>(rng.next_below(1000));
    CHECK(chain::compute_density(ind, max_ind) ==
          chain::compute_density(ind * k, max_ind * k));
  }
}

TEST_CASE("cohesion is one minus the population std") {
  const double a[] = {0.4, 0.4, 0.4};
  CHECK(chain::compute_cohesion(a) == 1.0);
  const double b[] = {-1.0, 1.0};
  CHECK(chain::compute_cohesion(b) == 0.0);
  const double c[] = {0.0, 1.0};
  CHECK(chain::compute_cohesion(c) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(chain::compute_cohesion({}), contract_error);
}

TEST_CASE("authority excludes emotional outliers before measuring spread") {
  const double flat[] = {0.5, 0.5, 0.5};
  CHECK(chain::compute_authority(flat, 2.0) == 1.0);

  // mu = 0.12, sigma = 0.56; the -1.0 deviation is exactly 2 sigma and is
  // excluded, leaving four identical values.
  const double spike[] = {0.4, 0.4, 0.4, 0.4, -1.0};
  CHECK(chain::compute_authority(spike, 2.0) == 1.0);
  CHECK(chain::compute_cohesion(spike) < 1.0);

  const double single[] = {0.9};
  CHECK(chain::compute_authority(single, 2.0) == 1.0);
}

TEST_CASE("authority never measures more spread than cohesion") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> emotions;
    const std::uint64_t n = 3 + rng.next_below(12);
    for (std::uint64_t i = 0; i < n; ++i)
      emotions.push_back(rng.next_unit() * 2.0 - 1.0);
    const double t1 = chain::compute_cohesion(emotions);
    const double t2 = chain::compute_authority(emotions, 2.0);
    CHECK(t2 >= t1 - 1e-12);
  }
}

TEST_CASE("influence normalizes by the scope maxima") {
  auto [fan, repost] = chain::compute_influence(1000, 0, 1000, 50);
  CHECK(fan == 1.0);
  CHECK(repost == 0.0);
  std::tie(fan, repost) = chain::compute_influence(250, 50, 1000, 50);
  CHECK(fan == doctest::Approx(0.25));
  CHECK(repost == 1.0);
  // zero maxima normalize to zero
  std::tie(fan, repost) = chain::compute_influence(0, 0, 0, 0);
  CHECK(fan == 0.0);
  CHECK(repost == 0.0);
}

TEST_CASE("trust is the weighted combination of its components") {
  const chain::TrustWeights w{0.35, 0.35, 0.05, 0.25};
  CHECK(chain::compute_trust(1, 1, 1, 1, w) == doctest::Approx(1.0));
  CHECK(chain::compute_trust(0, 0, 0, 0, w) == 0.0);
  CHECK(chain::compute_trust(1, 1, 0, 0, w) == doctest::Approx(0.70));
  CHECK_THROWS_AS(chain::compute_trust(1, 1, 1, 1, {0.5, 0.5, 0.5, 0.5}),
                  config_error);
}

TEST_CASE("mean emotion is the arithmetic mean") {
  const double a[] = {0.2, 0.4, 0.6};
  CHECK(chain::compute_mean_emotion(a) == doctest::Approx(0.4).epsilon(1e-12));
  const double b[] = {-0.5, 0.5};
  CHECK(chain::compute_mean_emotion(b) == 0.0);
  const double c[] = {1.0};
  CHECK(chain::compute_mean_emotion(c) == 1.0);
  CHECK_THROWS_AS(chain::compute_mean_emotion({}), contract_error);
}

TEST_CASE("aggregate_post_emotion blends macro and micro values") {
  chain::ChainConfig config;
  config.macro_weight = 0.6;
  chain::ClusterEmotion macro;
  macro.value = 0.3;
  const auto degenerate = chain::aggregate_post_emotion("p", macro, {}, config);
  CHECK(degenerate.value == 0.3);

  macro.value = 0.4;
  chain::ClusterEmotion micro;
  micro.density = 0.5;
  micro.value = 0.2;
  const auto blended =
      chain::aggregate_post_emotion("p", macro, {micro}, config);
  CHECK(blended.value == doctest::Approx(0.32).epsilon(1e-12));

  macro.value = 0.0;
  micro.value = 0.0;
  const auto zero = chain::aggregate_post_emotion("p", macro, {micro}, config);
  CHECK(zero.value == 0.0);
}

TEST_CASE("post value is bounded by its cluster values") {
  SplitMix64 rng(13);
  chain::ChainConfig config;
  for (int trial = 0; trial < 200; ++trial) {
    config.macro_weight = rng.next_unit();
    chain::ClusterEmotion macro;
    macro.value = rng.next_unit() * 2.0 - 1.0;
    std::vector<chain::ClusterEmotion> micros(1 + rng.next_below(5));
    double biggest = std::abs(macro.value);
    for (auto& m : micros) {
      m.density = 0.05 + 0.95 * rng.next_unit();
      m.value = rng.next_unit() * 2.0 - 1.0;
      biggest = std::max(biggest, std::abs(m.value));
    }
    const auto post =
        chain::aggregate_post_emotion("p", macro, micros, config);
    CHECK(std::abs(post.value) <= biggest + 1e-12);
  }
}

TEST_CASE("aggregate_topic_emotion averages post values, null when empty") {
  std::vector<chain::PostGroupEmotion> posts(2);
  posts[0].value = 0.1;
  posts[1].value = 0.3;
  CHECK(*chain::aggregate_topic_emotion(posts) ==
        doctest::Approx(0.2).epsilon(1e-12));
  posts.resize(1);
  CHECK(*chain::aggregate_topic_emotion(posts) == 0.1);
  CHECK_FALSE(chain::aggregate_topic_emotion({}).has_value());
}

TEST_CASE("compute_chain reproduces the hand-worked example") {
  const auto ds = worked_example();
  chain::ChainConfig config;  // defaults: weights (.35,.35,.05,.25), w_m 0.6
  const auto result = chain::compute_chain(ds, config);
  REQUIRE(result.posts.size() == 2);

  const auto& p1 = result.posts[0];
  CHECK(p1.post_id == "p1");
  CHECK(p1.macro.density == 1.0);
  CHECK(p1.macro.t1 == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(p1.macro.t2 == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(p1.macro.t3_fan == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p1.macro.t3_repost == 1.0);
  CHECK(p1.macro.trust == doctest::Approx(0.835).epsilon(1e-12));
  CHECK(p1.macro.mean_emotion == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(p1.macro.value == doctest::Approx(0.334).epsilon(1e-12));
  REQUIRE(p1.micros.size() == 1);
  CHECK(p1.micros[0].density == 1.0);
  CHECK(p1.micros[0].trust == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(p1.micros[0].value == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(p1.value == doctest::Approx(0.0804).epsilon(1e-12));

  const auto& p2 = result.posts[1];
  CHECK(p2.macro.density == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(p2.micros.empty());
  CHECK(p2.value == doctest::Approx(4.0 / 9.0 * 0.75 * 0.8).epsilon(1e-12));

  REQUIRE(result.topic_value.has_value());
  CHECK(*result.topic_value ==
        doctest::Approx((0.0804 + 4.0 / 9.0 * 0.75 * 0.8) / 2.0).epsilon(1e-12));
}

TEST_CASE("cluster value keeps the sign of the mean emotion") {
  const auto ds = worked_example();
  const auto result = chain::compute_chain(ds, chain::ChainConfig{});
  for (const auto& post : result.posts) {
    if (post.macro.trust > 0.0) {
      const double lhs = post.macro.value;
      const double rhs = post.macro.mean_emotion;
      CHECK(((lhs > 0) == (rhs > 0) || rhs == 0.0));
    }
    CHECK(post.macro.value ==
          post.macro.density * post.macro.trust * post.macro.mean_emotion);
  }
}

TEST_CASE("neutral member emotions annihilate the cluster value") {
  auto ds = worked_example();
  for (auto& c : ds.comments) c.sentiment = 0.0;
  const auto result = chain::compute_chain(ds, chain::ChainConfig{});
  for (const auto& post : result.posts) {
    CHECK(post.macro.value == 0.0);  // D*T*0, regardless of D and T
    CHECK(post.value == 0.0);
  }
  CHECK(*result.topic_value == 0.0);
}

TEST_CASE("unresolved sentiment in a cluster is a contract violation") {
  auto ds = worked_example();
  ds.comments[0].sentiment.reset();
  CHECK_THROWS_AS(chain::compute_chain(ds, chain::ChainConfig{}),
                  contract_error);
}

TEST_CASE("chain output is reproducible across runs") {
  const auto ds = worked_example();
  const auto a = chain::compute_chain(ds, chain::ChainConfig{});
  const auto b = chain::compute_chain(ds, chain::ChainConfig{});
  REQUIRE(a.posts.size() == b.posts.size());
  for (std::size_t i = 0; i < a.posts.size(); ++i)
    CHECK(a.posts[i].value == b.posts[i].value);
  CHECK(*a.topic_value == *b.topic_value);
}
