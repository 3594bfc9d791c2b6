#include "emochain/sentiment.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emochain/errors.hpp"
#include "utf8_util.hpp"

namespace emochain::sentiment {

namespace {

bool is_word_byte(unsigned char ch) { return std::isalnum(ch) != 0; }

// Non-ASCII punctuation blocks treated as separators.
bool is_wide_punct(char32_t cp) {
  return (cp >= 0x2000 && cp <= 0x206F) ||  // general punctuation
         (cp >= 0x3000 && cp <= 0x303F) ||  // CJK symbols and punctuation
         (cp >= 0xFF00 && cp <= 0xFFEF);    // fullwidth forms
}

double count_of(const std::unordered_map<std::string, double>& m,
                const std::string& token) {
  auto it = m.find(token);
  return it == m.end() ? 0.0 : it->second;
}

void check_counts(const std::unordered_map<std::string, double>& m,
                  const char* label) {
  for (const auto& [token, count] : m) {
    if (!(count >= 0.0))
      throw config_error(std::string("lexicon: negative count for ") + label +
                         " token '" + token + "'");
  }
}

}  // namespace

void validate_lexicon(const Lexicon& lexicon) {
  if (!(lexicon.smoothing_alpha > 0.0))
    throw config_error("lexicon: smoothing_alpha must be > 0");
  check_counts(lexicon.positive_tokens, "positive");
  check_counts(lexicon.negative_tokens, "negative");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const auto dec = detail::decode_utf8(text, i);
    if (!dec.valid) {
      flush();
      ++i;
      continue;
    }
    const char32_t cp = dec.cp;
    if (cp < 0x80) {
      if (is_word_byte(static_cast<unsigned char>(cp))) {
        current.push_back(static_cast<char>(
            std::tolower(static_cast<unsigned char>(cp))));
      } else {
        flush();
      }
    } else if (detail::is_cjk_like(cp)) {
      flush();
      std::string single;
      detail::append_utf8(single, cp);
      tokens.push_back(std::move(single));
    } else if (is_wide_punct(cp) || detail::is_surrogate(cp)) {
      flush();
    } else {
      current.append(text.substr(i, dec.len));  // other scripts: word chars
    }
    i += dec.len;
  }
  flush();
  return tokens;
}

double score_text(std::string_view text, const Lexicon& lexicon) {
  const double alpha = lexicon.smoothing_alpha;
  double log_odds = 0.0;
  for (const auto& token : tokenize(text)) {
    const double cp = count_of(lexicon.positive_tokens, token);
    const double cn = count_of(lexicon.negative_tokens, token);
    if (cp <= 0.0 && cn <= 0.0) continue;  // unknown everywhere: no evidence
    log_odds += std::log(cp + alpha) - std::log(cn + alpha);
  }
  // 2p - 1 for p = 1/(1 + exp(-log_odds))
  return std::tanh(0.5 * log_odds);
}

corpus::InteractionDataset resolve_sentiments(
    const corpus::InteractionDataset& ds, const Lexicon* lexicon) {
  if (lexicon) validate_lexicon(*lexicon);
  corpus::InteractionDataset out = ds;
  auto fill = [&](std::optional<double>& slot, const std::string& text,
                  const std::string& id) {
    if (slot.has_value()) return;  // passthrough always wins
    if (!lexicon)
      throw config_error("record '" + id +
                         "' has no precomputed sentiment and no lexicon was given");
    slot = score_text(text, *lexicon);
  };
  for (auto& p : out.posts) fill(p.sentiment, p.text, p.id);
  for (auto& c : out.comments) fill(c.sentiment, c.text, c.id);
  return out;
}

Lexicon load_lexicon_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open lexicon file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw config_error("lexicon file is not a JSON object: " + path);
  Lexicon lex;
  if (j.contains("smoothing_alpha")) {
    if (!j["smoothing_alpha"].is_number())
      throw config_error("lexicon: smoothing_alpha must be a number");
    lex.smoothing_alpha = j["smoothing_alpha"].get<double>();
  }
  auto load_map = [&](const char* key,
                      std::unordered_map<std::string, double>& m) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_object())
      throw config_error(std::string("lexicon: missing '") + key + "' map");
    for (auto& [token, count] : it->items()) {
      if (!count.is_number())
        throw config_error("lexicon: count for token '" + token +
                           "' is not a number");
      m[token] = count.get<double>();
    }
  };
  load_map("positive", lex.positive_tokens);
  load_map("negative", lex.negative_tokens);
  validate_lexicon(lex);
  return lex;
}

Lexicon load_lexicon_tsv(const std::string& positive_path,
                         const std::string& negative_path, double alpha) {
  Lexicon lex;
  lex.smoothing_alpha = alpha;
  auto load = [](const std::string& path,
                 std::unordered_map<std::string, double>& m) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open lexicon file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos || tab == 0)
        throw config_error("lexicon " + path + ": line " +
                           std::to_string(lineno) + " is not token<TAB>count");
      const std::string token = line.substr(0, tab);
      double count = 0.0;
      try {
        count = std::stod(line.substr(tab + 1));
      } catch (const std::exception&) {
        throw config_error("lexicon " + path + ": bad count on line " +
                           std::to_string(lineno));
      }
      m[token] += count;
    }
  };
  load(positive_path, lex.positive_tokens);
  load(negative_path, lex.negative_tokens);
  validate_lexicon(lex);
  return lex;
}

}  // namespace emochain::sentiment
