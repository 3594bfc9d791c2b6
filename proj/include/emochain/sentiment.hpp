#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emochain/corpus.hpp"

namespace emochain::sentiment {

/// Token counts per polarity class for the built-in naive-Bayes scorer.
struct Lexicon {
  std::unordered_map<std::string, double> positive_tokens;
  std::unordered_map<std::string, double> negative_tokens;
  double smoothing_alpha = 1.0;
};

/// Throws config_error on negative counts or non-positive alpha.
void validate_lexicon(const Lexicon& lexicon);

/// Splits on whitespace/punctuation and lowercases ASCII. Runs of characters
/// from scripts without word separators (CJK, kana, hangul) become one token
/// per code point.
std::vector<std::string> tokenize(std::string_view text);

/// Sentiment tendency in [-1, 1]: naive-Bayes posterior over the two classes
/// (uniform priors, Laplace smoothing, per-token likelihood proportional to
/// count + alpha), mapped through 2p - 1. Empty or all-unknown text scores
/// exactly 0.
double score_text(std::string_view text, const Lexicon& lexicon);

/// Fills in sentiment for every post and comment. Precomputed values pass
/// through untouched; missing ones are scored with the lexicon. A missing
/// value with no lexicon is a config_error.
corpus::InteractionDataset resolve_sentiments(const corpus::InteractionDataset& ds,
                                              const Lexicon* lexicon = nullptr);

/// Structured file with both maps:
/// {"smoothing_alpha": 1.0, "positive": {tok: count}, "negative": {...}}
Lexicon load_lexicon_json(const std::string& path);

/// Two-column `token<TAB>count` file per class.
Lexicon load_lexicon_tsv(const std::string& positive_path,
                         const std::string& negative_path, double alpha = 1.0);

}  // namespace emochain::sentiment
