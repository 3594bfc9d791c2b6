#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "emochain/corpus.hpp"
#include "emochain/errors.hpp"

using namespace emochain;

namespace {

const std::string kDataDir = EMOCHAIN_TEST_DATA_DIR;

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path = "corpus_test_" + std::to_string(counter++) + ".jsonl";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("ingest round-trips the small fixture counts") {
  const auto result = corpus::ingest_dataset(kDataDir + "/fixture_small.jsonl");
  const auto& ds = result.dataset;
  CHECK(ds.accounts.size() == 2);
  CHECK(ds.posts.size() == 1);
  CHECK(ds.comments.size() == 3);
  CHECK(ds.topic == "ChatGPT");
  CHECK(ds.platform == "Weibo");
  CHECK(result.summary.comments.dropped() == 0);

  std::size_t second_level = 0;
  for (const auto& c : ds.comments)
    if (c.is_second_level()) ++second_level;
  CHECK(second_level == 1);
}

TEST_CASE("ingest of an empty file yields an empty dataset") {
  TempFile f("");
  const auto result = corpus::ingest_dataset(f.path);
  CHECK(result.dataset.accounts.empty());
  CHECK(result.dataset.posts.empty());
  CHECK(result.dataset.comments.empty());
  CHECK(result.summary.lines_total == 0);
}

TEST_CASE("ingest drops a comment whose parent post is missing") {
  TempFile f(
      R"({"kind":"account","id":"a1","follower_count":0,"is_celebrity":false})"
      "\n"
      R"({"kind":"comment","id":"c1","parent_post":"nope","parent_comment":null,"author":"a1","text":"x","like_count":0,"sentiment":0.1})"
      "\n");
  const auto result = corpus::ingest_dataset(f.path);
  CHECK(result.dataset.comments.empty());
  CHECK(result.summary.comments.dropped_dangling == 1);
}

TEST_CASE("ingest drops second-level comments hanging off second-level parents") {
  TempFile f(
      R"({"kind":"account","id":"a1","follower_count":0,"is_celebrity":false})"
      "\n"
      R"({"kind":"post","id":"p1","author":"a1","topic":"t","platform":"x","text":"hi","like_count":0,"repost_count":0,"sentiment":0.0})"
      "\n"
      R"({"kind":"comment","id":"c1","parent_post":"p1","parent_comment":null,"author":"a1","text":"l1","like_count":0,"sentiment":0.0})"
      "\n"
      R"({"kind":"comment","id":"c2","parent_post":"p1","parent_comment":"c1","author":"a1","text":"l2","like_count":0,"sentiment":0.0})"
      "\n"
      R"({"kind":"comment","id":"c3","parent_post":"p1","parent_comment":"c2","author":"a1","text":"l3","like_count":0,"sentiment":0.0})"
      "\n");
  const auto result = corpus::ingest_dataset(f.path);
  CHECK(result.dataset.comments.size() == 2);  // c1, c2; depth-3 c3 dropped
  CHECK(result.summary.comments.dropped_dangling == 1);
}

TEST_CASE("ingest counters balance per kind") {
  TempFile f(
      R"({"kind":"account","id":"a1","follower_count":0,"is_celebrity":false})"
      "\n"
      R"({"kind":"account","id":"a1","follower_count":5,"is_celebrity":true})"
      "\n"
      R"({"kind":"account","id":"a2","follower_count":-3,"is_celebrity":false})"
      "\n"
      "this is not json\n"
      R"({"kind":"post","id":"p1","author":"ghost","topic":"t","platform":"x","text":"hi","like_count":0,"repost_count":0,"sentiment":null})"
      "\n"
      R"({"kind":"post","id":"p2","author":"a1","topic":"t","platform":"x","text":"hi","like_count":0,"repost_count":0,"sentiment":2.5})"
      "\n");
  const auto result = corpus::ingest_dataset(f.path);
  const auto& sum = result.summary;
  CHECK(sum.lines_malformed == 1);
  CHECK(sum.accounts.seen == 3);
  CHECK(sum.accounts.retained == 1);
  CHECK(sum.accounts.dropped() == 2);
  CHECK(sum.accounts.seen - sum.accounts.retained == sum.accounts.dropped());
  CHECK(sum.posts.seen == 2);
  CHECK(sum.posts.retained == 0);
  CHECK(sum.posts.dropped_dangling == 1);  // ghost author
  CHECK(sum.posts.dropped_invalid == 1);   // sentiment out of range
  // duplicate policy: first wins
  CHECK(result.dataset.accounts[0].follower_count == 0);
}

TEST_CASE("ingest is idempotent") {
  const std::string path = kDataDir + "/fixture_small.jsonl";
  const auto a = corpus::ingest_dataset(path);
  const auto b = corpus::ingest_dataset(path);
  CHECK(a.dataset == b.dataset);
}

TEST_CASE("ingest of a missing file is fatal") {
  CHECK_THROWS_AS(corpus::ingest_dataset("does_not_exist.jsonl"), io_error);
}

TEST_CASE("preprocess strips control characters") {
  corpus::InteractionDataset ds;
  ds.accounts.push_back({"a1", "", 0, false});
  corpus::Post p;
  p.id = "p1";
  p.author_id = "a1";
  p.text = std::string("be\x07llo");
  ds.posts.push_back(p);
  const auto result = corpus::preprocess(ds);
  CHECK(result.dataset.posts[0].text == "bello");
  CHECK(result.summary.control_chars_stripped == 1);
}

TEST_CASE("strip_control_chars keeps tabs and newlines, drops invalid UTF-8") {
  std::size_t removed = 0;
  CHECK(corpus::strip_control_chars("a\tb\nc", &removed) == "a\tb\nc");
  CHECK(removed == 0);
  CHECK(corpus::strip_control_chars("a\rb", &removed) == "ab");
  CHECK(removed == 1);
  removed = 0;
  CHECK(corpus::strip_control_chars("ok\xC3(\x80", &removed) == "ok(");
  CHECK(removed == 2);  // truncated lead byte, stray continuation
  removed = 0;
  CHECK(corpus::strip_control_chars("中文ok", &removed) == "中文ok");
  CHECK(removed == 0);
}

TEST_CASE("preprocess dedupes ids, first occurrence wins") {
  corpus::InteractionDataset ds;
  ds.accounts.push_back({"a1", "", 0, false});
  corpus::Post p;
  p.id = "p1";
  p.author_id = "a1";
  p.text = "first";
  ds.posts.push_back(p);
  p.text = "second";
  ds.posts.push_back(p);
  const auto result = corpus::preprocess(ds);
  REQUIRE(result.dataset.posts.size() == 1);
  CHECK(result.dataset.posts[0].text == "first");
  CHECK(result.summary.duplicates_removed == 1);
}

TEST_CASE("preprocess keyword filter keeps matching posts and cascades") {
  corpus::InteractionDataset ds;
  ds.accounts.push_back({"a1", "", 0, false});
  corpus::Post p;
  p.id = "p1";
  p.author_id = "a1";
  p.text = "ChatGPT rocks";
  ds.posts.push_back(p);
  p.id = "p2";
  p.text = "nice weather";
  ds.posts.push_back(p);
  corpus::Comment c;
  c.id = "c1";
  c.parent_post_id = "p2";
  c.author_id = "a1";
  ds.comments.push_back(c);
  const auto result = corpus::preprocess(ds, {"chatgpt"});
  REQUIRE(result.dataset.posts.size() == 1);
  CHECK(result.dataset.posts[0].id == "p1");
  CHECK(result.summary.posts_filtered == 1);
  CHECK(result.summary.comments_cascaded == 1);
  CHECK(result.dataset.comments.empty());
}

TEST_CASE("after ingest+preprocess every comment chain ends at a post within 2 hops") {
  const auto ingested = corpus::ingest_dataset(kDataDir + "/fixture_small.jsonl");
  const auto pre = corpus::preprocess(ingested.dataset);
  for (const auto& c : pre.dataset.comments) {
    if (!c.is_second_level()) {
      CHECK(pre.dataset.find_post(c.parent_post_id) != nullptr);
      continue;
    }
    const corpus::Comment* parent = pre.dataset.find_comment(*c.parent_comment_id);
    REQUIRE(parent != nullptr);
    CHECK_FALSE(parent->is_second_level());
    CHECK(pre.dataset.find_post(parent->parent_post_id) != nullptr);
  }
}

TEST_CASE("validate_profile accepts share maps summing to one") {
  corpus::PlatformProfile p;
  p.platform = "Weibo";
  p.education_shares = {0.286, 0.30, 0.414};
  p.age_shares = {0.4, 0.4, 0.2};
  CHECK_NOTHROW(corpus::validate_profile(p));
}

TEST_CASE("validate_profile rejects age shares summing to 0.9") {
  corpus::PlatformProfile p;
  p.platform = "x";
  p.education_shares = {0.2, 0.3, 0.5};
  p.age_shares = {0.3, 0.3, 0.3};
  CHECK_THROWS_WITH_AS(corpus::validate_profile(p),
                       doctest::Contains("age_shares"), config_error);
}

TEST_CASE("validate_profile accepts the Bilibili youth share when complete") {
  corpus::PlatformProfile p;
  p.platform = "Bilibili";
  p.education_shares = {0.08, 0.12, 0.80};
  p.age_shares = {0.746, 0.194, 0.06};
  CHECK_NOTHROW(corpus::validate_profile(p));
  CHECK(corpus::share_for_bucket(p, "le25") == doctest::Approx(0.746));
}

TEST_CASE("share_for_bucket rejects unknown labels") {
  corpus::PlatformProfile p;
  CHECK_THROWS_AS(corpus::share_for_bucket(p, "boomers"), contract_error);
}

TEST_CASE("dataset write/ingest round-trip preserves structure") {
  const auto first = corpus::ingest_dataset(kDataDir + "/fixture_small.jsonl");
  TempFile f("");
  corpus::write_dataset_jsonl(first.dataset, f.path);
  const auto second = corpus::ingest_dataset(f.path);
  CHECK(first.dataset == second.dataset);
}
