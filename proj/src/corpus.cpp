#include "emochain/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "emochain/errors.hpp"
#include "utf8_util.hpp"

namespace emochain::corpus {

namespace {

using nlohmann::json;

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  auto it = std::partition_point(items.begin(), items.end(),
                                 [&](const T& x) { return x.id < id; });
  if (it != items.end() && it->id == id) return &*it;
  return nullptr;
}

bool get_string(const json& j, const char* key, std::string& out) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return false;
  out = it->get<std::string>();
  return true;
}

bool get_count(const json& j, const char* key, std::int64_t& out) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) return false;
  out = it->get<std::int64_t>();
  return out >= 0;
}

bool get_bool(const json& j, const char* key, bool& out) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_boolean()) return false;
  out = it->get<bool>();
  return true;
}

// sentiment: absent or null means "not precomputed"; a number must be in [-1,1]
bool get_sentiment(const json& j, std::optional<double>& out) {
  auto it = j.find("sentiment");
  if (it == j.end() || it->is_null()) {
    out.reset();
    return true;
  }
  if (!it->is_number()) return false;
  const double v = it->get<double>();
  if (!(v >= -1.0 && v <= 1.0)) return false;
  out = v;
  return true;
}

bool parse_account(const json& j, Account& a) {
  if (!get_string(j, "id", a.id) || a.id.empty()) return false;
  if (!get_count(j, "follower_count", a.follower_count)) return false;
  if (!get_bool(j, "is_celebrity", a.is_celebrity)) return false;
  if (j.contains("display_name")) {
    if (!get_string(j, "display_name", a.display_name)) return false;
  }
  return true;
}

bool parse_post(const json& j, Post& p) {
  if (!get_string(j, "id", p.id) || p.id.empty()) return false;
  if (!get_string(j, "author", p.author_id)) return false;
  if (!get_string(j, "topic", p.topic)) return false;
  if (!get_string(j, "platform", p.platform)) return false;
  if (!get_string(j, "text", p.text)) return false;
  if (!get_count(j, "like_count", p.like_count)) return false;
  if (!get_count(j, "repost_count", p.repost_count)) return false;
  if (!get_sentiment(j, p.sentiment)) return false;
  if (j.contains("timestamp") && !j["timestamp"].is_null()) {
    std::string ts;
    if (!get_string(j, "timestamp", ts)) return false;
    p.timestamp = std::move(ts);
  }
  return true;
}

bool parse_comment(const json& j, Comment& c) {
  if (!get_string(j, "id", c.id) || c.id.empty()) return false;
  if (!get_string(j, "parent_post", c.parent_post_id)) return false;
  if (!get_string(j, "author", c.author_id)) return false;
  if (!get_string(j, "text", c.text)) return false;
  if (!get_count(j, "like_count", c.like_count)) return false;
  if (!get_sentiment(j, c.sentiment)) return false;
  auto it = j.find("parent_comment");
  if (it != j.end() && !it->is_null()) {
    if (!it->is_string()) return false;
    c.parent_comment_id = it->get<std::string>();
  }
  return true;
}

bool all_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char ch) {
    return std::isspace(ch) != 0;
  });
}

void sort_by_id(InteractionDataset& ds) {
  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(ds.accounts.begin(), ds.accounts.end(), by_id);
  std::sort(ds.posts.begin(), ds.posts.end(), by_id);
  std::sort(ds.comments.begin(), ds.comments.end(), by_id);
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out)
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

double share_sum_edu(const EducationShares& e) {
  return e.junior_high_or_below + e.senior_high + e.bachelor_or_above;
}

double share_sum_age(const AgeShares& a) { return a.le25 + a.a26_35 + a.ge36; }

bool fractions_ok(std::initializer_list<double> vs) {
  for (double v : vs)
    if (!(v >= 0.0 && v <= 1.0)) return false;
  return true;
}

}  // namespace

const Account* InteractionDataset::find_account(std::string_view id) const {
  return find_by_id(accounts, id);
}

const Post* InteractionDataset::find_post(std::string_view id) const {
  return find_by_id(posts, id);
}

const Comment* InteractionDataset::find_comment(std::string_view id) const {
  return find_by_id(comments, id);
}

IngestResult ingest_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open dataset file: " + path);

  IngestResult result;
  IngestSummary& sum = result.summary;

  std::vector<Account> raw_accounts;
  std::vector<Post> raw_posts;
  std::vector<Comment> raw_comments;

  std::string line;
  while (std::getline(in, line)) {
    ++sum.lines_total;
    if (line.empty() || all_blank(line)) {
      ++sum.lines_blank;
      continue;
    }
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    std::string kind;
    if (j.is_discarded() || !j.is_object() || !get_string(j, "kind", kind)) {
      ++sum.lines_malformed;
      continue;
    }
    if (kind == "account") {
      ++sum.accounts.seen;
      Account a;
      if (parse_account(j, a))
        raw_accounts.push_back(std::move(a));
      else
        ++sum.accounts.dropped_invalid;
    } else if (kind == "post") {
      ++sum.posts.seen;
      Post p;
      if (parse_post(j, p))
        raw_posts.push_back(std::move(p));
      else
        ++sum.posts.dropped_invalid;
    } else if (kind == "comment") {
      ++sum.comments.seen;
      Comment c;
      if (parse_comment(j, c))
        raw_comments.push_back(std::move(c));
      else
        ++sum.comments.dropped_invalid;
    } else {
      ++sum.lines_malformed;
    }
  }
  if (in.bad()) throw io_error("read failure on dataset file: " + path);

  InteractionDataset& ds = result.dataset;

  std::unordered_set<std::string> account_ids;
  for (auto& a : raw_accounts) {
    if (!account_ids.insert(a.id).second) {
      ++sum.accounts.dropped_duplicate;
      continue;
    }
    ds.accounts.push_back(std::move(a));
  }
  sum.accounts.retained = ds.accounts.size();

  std::unordered_set<std::string> post_ids;
  for (auto& p : raw_posts) {
    if (post_ids.count(p.id)) {
      ++sum.posts.dropped_duplicate;
      continue;
    }
    if (!account_ids.count(p.author_id)) {
      ++sum.posts.dropped_dangling;
      continue;
    }
    post_ids.insert(p.id);
    ds.posts.push_back(std::move(p));
  }
  sum.posts.retained = ds.posts.size();

  // Comments resolve in two passes so a second-level comment can only attach
  // to a retained first-level one (depth <= 2 by construction).
  std::unordered_set<std::string> comment_ids;
  std::unordered_map<std::string, std::string> first_level_post;  // id -> post
  for (int pass = 0; pass < 2; ++pass) {
    for (auto& c : raw_comments) {
      if (c.is_second_level() != (pass == 1)) continue;
      if (comment_ids.count(c.id)) {
        ++sum.comments.dropped_duplicate;
        continue;
      }
      bool ok = post_ids.count(c.parent_post_id) > 0 &&
                account_ids.count(c.author_id) > 0;
      if (ok && c.is_second_level()) {
        auto parent = first_level_post.find(*c.parent_comment_id);
        ok = parent != first_level_post.end() &&
             parent->second == c.parent_post_id;
      }
      if (!ok) {
        ++sum.comments.dropped_dangling;
        continue;
      }
      comment_ids.insert(c.id);
      if (!c.is_second_level()) first_level_post[c.id] = c.parent_post_id;
      ds.comments.push_back(std::move(c));
    }
  }
  sum.comments.retained = ds.comments.size();

  // Dataset labels come from the first retained post in file order.
  if (!ds.posts.empty()) {
    ds.topic = ds.posts.front().topic;
    ds.platform = ds.posts.front().platform;
  }
  sort_by_id(ds);
  return result;
}

std::string strip_control_chars(std::string_view text, std::size_t* removed) {
  std::string out;
  out.reserve(text.size());
  std::size_t dropped = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto dec = detail::decode_utf8(text, i);
    if (!dec.valid) {
      ++dropped;  // garbled byte
      ++i;
      continue;
    }
    const char32_t cp = dec.cp;
    const bool control = (cp < 0x20 && cp != 0x09 && cp != 0x0A) ||
                         cp == 0x7F || (cp >= 0x80 && cp <= 0x9F);
    if (control || detail::is_surrogate(cp)) {
      ++dropped;
    } else {
      out.append(text.substr(i, dec.len));
    }
    i += dec.len;
  }
  if (removed) *removed += dropped;
  return out;
}

PreprocessResult preprocess(const InteractionDataset& ds,
                            const std::vector<std::string>& topic_keywords) {
  PreprocessResult result;
  PreprocessSummary& sum = result.summary;
  InteractionDataset& out = result.dataset;
  out.platform = ds.platform;
  out.topic = ds.topic;

  std::unordered_set<std::string> seen;
  for (const auto& a : ds.accounts) {
    if (!seen.insert(a.id).second) {
      ++sum.duplicates_removed;
      continue;
    }
    Account copy = a;
    copy.display_name = strip_control_chars(copy.display_name,
                                            &sum.control_chars_stripped);
    out.accounts.push_back(std::move(copy));
  }

  std::vector<std::string> keywords_lower;
  keywords_lower.reserve(topic_keywords.size());
  for (const auto& kw : topic_keywords) keywords_lower.push_back(ascii_lower(kw));

  seen.clear();
  std::unordered_set<std::string> kept_posts;
  for (const auto& p : ds.posts) {
    if (!seen.insert(p.id).second) {
      ++sum.duplicates_removed;
      continue;
    }
    Post copy = p;
    copy.text = strip_control_chars(copy.text, &sum.control_chars_stripped);
    if (!keywords_lower.empty()) {
      const std::string text_lower = ascii_lower(copy.text);
      const bool hit = std::any_of(
          keywords_lower.begin(), keywords_lower.end(),
          [&](const std::string& kw) {
            return !kw.empty() && text_lower.find(kw) != std::string::npos;
          });
      if (!hit) {
        ++sum.posts_filtered;
        continue;
      }
    }
    kept_posts.insert(copy.id);
    out.posts.push_back(std::move(copy));
  }

  seen.clear();
  std::unordered_set<std::string> kept_first_level;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& c : ds.comments) {
      if (c.is_second_level() != (pass == 1)) continue;
      if (!seen.insert(c.id).second) {
        ++sum.duplicates_removed;
        continue;
      }
      const bool parent_ok =
          kept_posts.count(c.parent_post_id) > 0 &&
          (!c.is_second_level() || kept_first_level.count(*c.parent_comment_id) > 0);
      if (!parent_ok) {
        ++sum.comments_cascaded;
        continue;
      }
      Comment copy = c;
      copy.text = strip_control_chars(copy.text, &sum.control_chars_stripped);
      if (!copy.is_second_level()) kept_first_level.insert(copy.id);
      out.comments.push_back(std::move(copy));
    }
  }

  sort_by_id(out);
  return result;
}

PlatformProfile validate_profile(PlatformProfile profile) {
  const auto& e = profile.education_shares;
  const auto& a = profile.age_shares;
  if (!fractions_ok({e.junior_high_or_below, e.senior_high, e.bachelor_or_above}) ||
      std::abs(share_sum_edu(e) - 1.0) > 1e-9) {
    throw config_error("platform profile '" + profile.platform +
                       "': education_shares must be fractions summing to 1");
  }
  if (!fractions_ok({a.le25, a.a26_35, a.ge36}) ||
      std::abs(share_sum_age(a) - 1.0) > 1e-9) {
    throw config_error("platform profile '" + profile.platform +
                       "': age_shares must be fractions summing to 1");
  }
  return profile;
}

double share_for_bucket(const PlatformProfile& p, std::string_view bucket) {
  if (bucket == "junior_high_or_below") return p.education_shares.junior_high_or_below;
  if (bucket == "senior_high") return p.education_shares.senior_high;
  if (bucket == "bachelor_or_above") return p.education_shares.bachelor_or_above;
  if (bucket == "le25") return p.age_shares.le25;
  if (bucket == "a26_35") return p.age_shares.a26_35;
  if (bucket == "ge36") return p.age_shares.ge36;
  throw contract_error("unknown demographic bucket: " + std::string(bucket));
}

void write_dataset_jsonl(const InteractionDataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write dataset file: " + path);
  using nlohmann::ordered_json;
  for (const auto& a : ds.accounts) {
    ordered_json j{{"kind", "account"},
                   {"id", a.id},
                   {"follower_count", a.follower_count},
                   {"is_celebrity", a.is_celebrity}};
    if (!a.display_name.empty()) j["display_name"] = a.display_name;
    out << j.dump() << '\n';
  }
  for (const auto& p : ds.posts) {
    ordered_json j{{"kind", "post"},       {"id", p.id},
                   {"author", p.author_id}, {"topic", p.topic},
                   {"platform", p.platform}, {"text", p.text},
                   {"like_count", p.like_count},
                   {"repost_count", p.repost_count}};
    j["sentiment"] = p.sentiment ? ordered_json(*p.sentiment) : ordered_json(nullptr);
    if (p.timestamp) j["timestamp"] = *p.timestamp;
    out << j.dump() << '\n';
  }
  for (const auto& c : ds.comments) {
    ordered_json j{{"kind", "comment"}, {"id", c.id},
                   {"parent_post", c.parent_post_id}};
    j["parent_comment"] =
        c.parent_comment_id ? ordered_json(*c.parent_comment_id) : ordered_json(nullptr);
    j["author"] = c.author_id;
    j["text"] = c.text;
    j["like_count"] = c.like_count;
    j["sentiment"] = c.sentiment ? ordered_json(*c.sentiment) : ordered_json(nullptr);
    out << j.dump() << '\n';
  }
  if (!out) throw io_error("write failure on dataset file: " + path);
}

}  // namespace emochain::corpus
