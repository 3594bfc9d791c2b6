#include <doctest.h>

#include <cmath>

#include "emochain/errors.hpp"
#include "emochain/rng.hpp"
#include "emochain/sentiment.hpp"

using namespace emochain;

namespace {

const std::string kDataDir = EMOCHAIN_TEST_DATA_DIR;

sentiment::Lexicon tiny_lexicon() {
  sentiment::Lexicon lex;
  lex.positive_tokens = {{"good", 2.0}};
  lex.negative_tokens = {{"bad", 2.0}};
  return lex;
}

}  // namespace

TEST_CASE("tokenize splits on whitespace and punctuation, lowercases") {
  const auto tokens = sentiment::tokenize("Hello, WORLD!  it's 42");
  CHECK(tokens == std::vector<std::string>{"hello", "world", "it", "s", "42"});
}

TEST_CASE("tokenize falls back to per-codepoint tokens for CJK runs") {
  const auto tokens = sentiment::tokenize("ChatGPT很好");
  CHECK(tokens == std::vector<std::string>{"chatgpt", "很", "好"});
  const auto punct = sentiment::tokenize("好。好");
  CHECK(punct == std::vector<std::string>{"好", "好"});
}

TEST_CASE("empty text scores exactly zero") {
  CHECK(sentiment::score_text("", tiny_lexicon()) == 0.0);
  CHECK(sentiment::score_text("   \t ", tiny_lexicon()) == 0.0);
}

TEST_CASE("all-unknown text scores exactly zero") {
  CHECK(sentiment::score_text("completely unseen words", tiny_lexicon()) == 0.0);
}

// Hand computation, alpha = 1: "good" has counts (2, 0), so the posterior is
// (2+1) / ((2+1) + (0+1)) = 0.75 and the score is 2*0.75 - 1 = 0.5. Two
// occurrences square the likelihood ratio: p = 9/10, score 0.8.
TEST_CASE("positive-only tokens score positive, matching the hand posterior") {
  const auto lex = tiny_lexicon();
  CHECK(sentiment::score_text("good", lex) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sentiment::score_text("good good", lex) ==
        doctest::Approx(0.8).epsilon(1e-12));
  CHECK(sentiment::score_text("bad", lex) ==
        doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("tokens with identical counts in both classes score zero") {
  sentiment::Lexicon lex;
  lex.positive_tokens = {{"meh", 3.0}, {"fine", 1.0}, {"extra", 9.0}};
  lex.negative_tokens = {{"meh", 3.0}, {"fine", 1.0}};
  CHECK(sentiment::score_text("meh fine meh", lex) == 0.0);
}

TEST_CASE("score is always within [-1, 1] and swaps sign with the classes") {
  SplitMix64 rng(99);
  const char* vocabulary[] = {"alpha", "beta", "gamma", "delta", "epsilon",
                              "zeta",  "eta",  "theta", "iota",  "kappa"};
  for (int trial = 0; trial < 200; ++trial) {
    sentiment::Lexicon lex;
    lex.smoothing_alpha = 0.25 + rng.next_unit() * 3.0;
    for (const char* word : vocabulary) {
      if (rng.next_unit() < 0.7)
        lex.positive_tokens[word] = static_cast<double>(rng.next_below(20));
      if (rng.next_unit() < 0.7)
        lex.negative_tokens[word] = static_cast<double>(rng.next_below(20));
    }
    std::string text;
    const std::uint64_t words = 1 + rng.next_below(12);
    for (std::uint64_t w = 0; w < words; ++w) {
      text += vocabulary[rng.next_below(10)];
      text += ' ';
    }
    const double score = sentiment::score_text(text, lex);
    CHECK(score >= -1.0);
    CHECK(score <= 1.0);

    sentiment::Lexicon swapped;
    swapped.smoothing_alpha = lex.smoothing_alpha;
    swapped.positive_tokens = lex.negative_tokens;
    swapped.negative_tokens = lex.positive_tokens;
    CHECK(sentiment::score_text(text, swapped) ==
          doctest::Approx(-score).epsilon(1e-12));
  }
}

TEST_CASE("resolve_sentiments passes precomputed values through untouched") {
  corpus::InteractionDataset ds;
  ds.accounts.push_back({"a1", "", 0, false});
  corpus::Post p;
  p.id = "p1";
  p.author_id = "a1";
  p.text = "good";
  p.sentiment = 0.7;
  ds.posts.push_back(p);
  corpus::Comment c;
  c.id = "c1";
  c.parent_post_id = "p1";
  c.author_id = "a1";
  c.text = "bad";
  ds.comments.push_back(c);

  const auto lex = tiny_lexicon();
  const auto resolved = sentiment::resolve_sentiments(ds, &lex);
  CHECK(resolved.posts[0].sentiment == 0.7);  // passthrough identity
  REQUIRE(resolved.comments[0].sentiment.has_value());
  CHECK(*resolved.comments[0].sentiment == doctest::Approx(-0.5));
}

TEST_CASE("fully precomputed dataset needs no lexicon and stays unchanged") {
  corpus::InteractionDataset ds;
  ds.accounts.push_back({"a1", "", 0, false});
  corpus::Post p;
  p.id = "p1";
  p.author_id = "a1";
  p.sentiment = -0.25;
  ds.posts.push_back(p);
  const auto resolved = sentiment::resolve_sentiments(ds, nullptr);
  CHECK(resolved == ds);
}

TEST_CASE("missing sentiment without a lexicon is a fatal configuration error") {
  corpus::InteractionDataset ds;
  corpus::Post p;
  p.id = "p1";
  ds.posts.push_back(p);
  CHECK_THROWS_AS(sentiment::resolve_sentiments(ds, nullptr), config_error);
}

TEST_CASE("lexicon validation rejects bad alpha and negative counts") {
  sentiment::Lexicon lex = tiny_lexicon();
  lex.smoothing_alpha = 0.0;
  CHECK_THROWS_AS(sentiment::validate_lexicon(lex), config_error);
  lex = tiny_lexicon();
  lex.negative_tokens["bad"] = -1.0;
  CHECK_THROWS_AS(sentiment::validate_lexicon(lex), config_error);
}

TEST_CASE("lexicon loads from the structured JSON file") {
  const auto lex = sentiment::load_lexicon_json(kDataDir + "/lexicon_demo.json");
  CHECK(lex.positive_tokens.at("good") == 4.0);
  CHECK(lex.negative_tokens.at("bad") == 4.0);
  CHECK(sentiment::score_text("good good", lex) > 0.0);
}
