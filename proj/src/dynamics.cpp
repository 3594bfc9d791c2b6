#include "emochain/dynamics.hpp"

#include <cmath>
#include <unordered_set>

#include "emochain/errors.hpp"

namespace emochain::dynamics {

namespace {

// Variance below roundoff noise is treated as zero so constant inputs do not
// produce garbage third moments or correlations.
bool negligible_variance(double m2, double mean) {
  return m2 <= 1e-24 * std::max(1.0, mean * mean);
}

double mean_of(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::optional<double> PolarityTally::positive_share() const {
  if (total() == 0) return std::nullopt;
  return static_cast<double>(positive_count) / static_cast<double>(total());
}

std::optional<double> PolarityTally::negative_share() const {
  if (total() == 0) return std::nullopt;
  return static_cast<double>(negative_count) / static_cast<double>(total());
}

PolarityTally tally_polarity(std::span<const double> post_values) {
  PolarityTally tally;
  for (double v : post_values) {
    if (v > 0.0)
      ++tally.positive_count;
    else
      ++tally.negative_count;
  }
  return tally;
}

std::optional<double> compute_skewness(std::span<const double> values,
                                       bool adjusted) {
  const std::size_t n = values.size();
  if (n < 3) return std::nullopt;
  const double mu = mean_of(values);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - mu;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (negligible_variance(m2, mu)) return std::nullopt;
  const double g1 = m3 / std::pow(m2, 1.5);
  if (!adjusted) return g1;
  const double nd = static_cast<double>(n);
  return g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
}

std::optional<double> mean_absolute_skewness(
    std::span<const SkewnessResult> rows) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const SkewnessResult& row : rows) {
    if (!row.coefficient) continue;
    sum += std::abs(*row.coefficient);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

CorrelationResult compute_pearson(std::span<const double> xs,
                                  std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw contract_error("pearson inputs differ in length");
  CorrelationResult result;
  result.n = xs.size();
  if (result.n < 2) return result;
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double nd = static_cast<double>(result.n);
  if (negligible_variance(sxx / nd, mx) || negligible_variance(syy / nd, my))
    return result;
  result.r = sxy / std::sqrt(sxx * syy);
  return result;
}

std::optional<double> no_comment_share(const corpus::InteractionDataset& ds) {
  if (ds.posts.empty()) return std::nullopt;
  std::unordered_set<std::string_view> commented;
  for (const corpus::Comment& c : ds.comments)
    if (!c.is_second_level()) commented.insert(c.parent_post_id);
  std::size_t without = 0;
  for (const corpus::Post& p : ds.posts)
    if (!commented.count(p.id)) ++without;
  return static_cast<double>(without) / static_cast<double>(ds.posts.size());
}

std::optional<double> celebrity_share(const corpus::InteractionDataset& ds) {
  std::unordered_set<std::string_view> commented;
  for (const corpus::Comment& c : ds.comments)
    if (!c.is_second_level()) commented.insert(c.parent_post_id);
  std::size_t forming = 0;
  std::size_t celebrity = 0;
  for (const corpus::Post& p : ds.posts) {
    if (!commented.count(p.id)) continue;
    ++forming;
    const corpus::Account* author = ds.find_account(p.author_id);
    if (!author)
      throw contract_error("unresolved author account '" + p.author_id + "'");
    if (author->is_celebrity) ++celebrity;
  }
  if (forming == 0) return std::nullopt;
  return static_cast<double>(celebrity) / static_cast<double>(forming);
}

CorrelationResult correlate_demographics(
    std::span<const corpus::PlatformProfile> profiles,
    std::span<const double> platform_emotions, std::string_view bucket) {
  if (profiles.size() != platform_emotions.size())
    throw contract_error("one emotion value per platform profile required");
  std::vector<double> shares;
  shares.reserve(profiles.size());
  for (const corpus::PlatformProfile& p : profiles)
    shares.push_back(corpus::share_for_bucket(p, bucket));
  CorrelationResult result = compute_pearson(
      shares, {platform_emotions.data(), platform_emotions.size()});
  result.x_name = std::string(bucket);
  result.y_name = "platform_mean_emotion";
  return result;
}

}  // namespace emochain::dynamics
