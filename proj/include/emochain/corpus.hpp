#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emochain::corpus {

struct Account {
  std::string id;
  std::string display_name;
  std::int64_t follower_count = 0;
  bool is_celebrity = false;  // platform-verified "big v"

  bool operator==(const Account&) const = default;
};

struct Post {
  std::string id;
  std::string author_id;
  std::string topic;
  std::string platform;
  std::string text;
  std::int64_t like_count = 0;
  std::int64_t repost_count = 0;
  std::optional<std::string> timestamp;  // ISO-8601, informational only
  std::optional<double> sentiment;       // precomputed, in [-1, 1]

  bool operator==(const Post&) const = default;
};

struct Comment {
  std::string id;
  std::string parent_post_id;
  std::optional<std::string> parent_comment_id;  // set iff second-level
  std::string author_id;
  std::string text;
  std::int64_t like_count = 0;
  std::optional<double> sentiment;

  bool is_second_level() const { return parent_comment_id.has_value(); }

  bool operator==(const Comment&) const = default;
};

/// All interactions for one topic on one platform. Vectors are sorted by id
/// and referentially intact after ingest; treat as immutable once built
/// (every pipeline stage takes it by const& and returns a fresh copy).
struct InteractionDataset {
  std::string platform;
  std::string topic;
  std::vector<Account> accounts;
  std::vector<Post> posts;
  std::vector<Comment> comments;

  const Account* find_account(std::string_view id) const;
  const Post* find_post(std::string_view id) const;
  const Comment* find_comment(std::string_view id) const;

  bool operator==(const InteractionDataset&) const = default;
};

struct KindCounters {
  std::size_t seen = 0;
  std::size_t retained = 0;
  std::size_t dropped_invalid = 0;    // bad field types/ranges
  std::size_t dropped_dangling = 0;   // unresolved reference or depth > 2
  std::size_t dropped_duplicate = 0;  // repeated id, first occurrence wins

  std::size_t dropped() const {
    return dropped_invalid + dropped_dangling + dropped_duplicate;
  }
};

struct IngestSummary {
  std::size_t lines_total = 0;
  std::size_t lines_blank = 0;
  std::size_t lines_malformed = 0;  // unparseable JSON or unknown kind
  KindCounters accounts;
  KindCounters posts;
  KindCounters comments;
};

struct IngestResult {
  InteractionDataset dataset;
  IngestSummary summary;
};

/// Reads one topic-platform dataset from a JSONL file (one record per line,
/// discriminated by "kind"). Records that fail validation are dropped and
/// counted; an unreadable file throws io_error.
IngestResult ingest_dataset(const std::string& path);

struct PreprocessSummary {
  std::size_t control_chars_stripped = 0;
  std::size_t duplicates_removed = 0;
  std::size_t posts_filtered = 0;      // matched no topic keyword
  std::size_t comments_cascaded = 0;   // dropped with their post or parent
};

struct PreprocessResult {
  InteractionDataset dataset;
  PreprocessSummary summary;
};

/// Strips control characters from texts, dedupes ids (first wins), and, when
/// topic_keywords is non-empty, keeps only posts whose text contains at least
/// one keyword (ASCII case-insensitive). Never fails.
PreprocessResult preprocess(const InteractionDataset& ds,
                            const std::vector<std::string>& topic_keywords = {});

/// Garbled-character scrub used by preprocess: drops Unicode Cc controls
/// (except tab and newline), surrogate code points, and invalid UTF-8 bytes.
std::string strip_control_chars(std::string_view text,
                                std::size_t* removed = nullptr);

struct EducationShares {
  double junior_high_or_below = 0;
  double senior_high = 0;
  double bachelor_or_above = 0;

  bool operator==(const EducationShares&) const = default;
};

struct AgeShares {
  double le25 = 0;
  double a26_35 = 0;
  double ge36 = 0;

  bool operator==(const AgeShares&) const = default;
};

/// Exogenous per-platform user demographics plus mechanism flags.
struct PlatformProfile {
  std::string platform;
  EducationShares education_shares;
  AgeShares age_shares;
  bool repost_is_internal = false;  // Weibo-style visible repost

  bool operator==(const PlatformProfile&) const = default;
};

/// Each share map must sum to 1 within 1e-9 with all fractions in [0, 1];
/// otherwise throws config_error naming the offending map.
PlatformProfile validate_profile(PlatformProfile profile);

/// Share for one demographic bucket label (e.g. "senior_high", "le25").
/// Unknown labels throw contract_error.
double share_for_bucket(const PlatformProfile& profile, std::string_view bucket);

/// Writes the dataset back out in the ingest record schema (accounts, then
/// posts, then comments, each sorted by id).
void write_dataset_jsonl(const InteractionDataset& ds, const std::string& path);

}  // namespace emochain::corpus
