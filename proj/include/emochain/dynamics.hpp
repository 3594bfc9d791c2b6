#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "emochain/corpus.hpp"

namespace emochain::dynamics {

/// Binary polarity split of post group emotion values: > 0 is positive,
/// <= 0 is negative (zero counts as negative).
struct PolarityTally {
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;

  std::size_t total() const { return positive_count + negative_count; }
  std::optional<double> positive_share() const;
  std::optional<double> negative_share() const;
};

PolarityTally tally_polarity(std::span<const double> post_values);

/// Skewness coefficient. adjusted=true gives the bias-corrected
/// Fisher-Pearson G1 = g1 * sqrt(n(n-1)) / (n-2); adjusted=false the plain
/// g1 = m3 / m2^(3/2) on population moments. nullopt when n < 3 or the
/// variance is zero (constant input up to roundoff).
std::optional<double> compute_skewness(std::span<const double> values,
                                       bool adjusted = true);

struct SkewnessResult {
  std::string topic;
  std::string platform;
  std::optional<double> coefficient;
};

/// Mean of |coefficient| over the non-null rows; all-null -> nullopt.
std::optional<double> mean_absolute_skewness(
    std::span<const SkewnessResult> rows);

struct CorrelationResult {
  std::string x_name;
  std::string y_name;
  std::optional<double> r;  // in [-1, 1] when defined
  std::size_t n = 0;
};

/// Sample Pearson r. nullopt when n < 2 or either side has zero variance.
/// Mismatched lengths are a contract_error.
CorrelationResult compute_pearson(std::span<const double> xs,
                                  std::span<const double> ys);

struct IndicatorRow {
  std::string topic;
  std::string platform;
  std::optional<double> no_comment_share;
  std::optional<double> celebrity_share;
};

/// Posts with zero first-level comments / all posts; nullopt on zero posts.
std::optional<double> no_comment_share(const corpus::InteractionDataset& ds);

/// Celebrity-authored share among cluster-forming posts (those with at least
/// one first-level comment); nullopt when no post forms a cluster.
std::optional<double> celebrity_share(const corpus::InteractionDataset& ds);

/// Pearson r between one demographic bucket's share across platforms and the
/// platform-average group emotion. Requires one emotion value per profile.
CorrelationResult correlate_demographics(
    std::span<const corpus::PlatformProfile> profiles,
    std::span<const double> platform_emotions, std::string_view bucket);

}  // namespace emochain::dynamics
