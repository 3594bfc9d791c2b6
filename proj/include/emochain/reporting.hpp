#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emochain/chain.hpp"
#include "emochain/config.hpp"
#include "emochain/corpus.hpp"
#include "emochain/dynamics.hpp"
#include "emochain/sentiment.hpp"

namespace emochain::report {

std::string tool_version();

/// One row of the rank / normalized-size / emotion plot data.
struct ClusterRow {
  std::size_t rank = 0;
  double normalized_size = 0;  // macro ind / max macro ind, in (0, 1]
  double emotion_value = 0;    // post group emotion value
  std::string post_id;
};

struct TopicReport {
  std::string topic;
  std::string platform;
  std::optional<double> group_emotion;
  dynamics::PolarityTally polarity;
  dynamics::SkewnessResult skewness;
  dynamics::IndicatorRow indicators;
  std::vector<ClusterRow> cluster_rows;  // ascending by emotion value
  std::vector<chain::PostGroupEmotion> posts;
};

TopicReport build_topic_report(const corpus::InteractionDataset& ds,
                               const chain::ChainResult& chain_result,
                               bool skewness_adjusted);

/// Topic x platform table of group emotion values plus an "Average" row,
/// cells fixed to 4 decimals, null rendered as an em dash. Topics and
/// platforms are sorted ascending. RFC-4180, LF line endings.
std::string format_emotion_table(std::span<const TopicReport> reports);

/// Rows sorted ascending by emotion value (ties broken by post id), rank
/// starting at 1. Requires at least one cluster.
std::string export_cluster_plot_data(const TopicReport& report);

struct RunManifest {
  std::string tool_version;
  std::string config_hash;
  std::string timestamp;  // the only non-deterministic field in a bundle
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
};

struct PipelineOptions {
  std::vector<std::string> input_paths;
  std::string config_path;
  std::string output_dir;
  std::vector<std::string> topic_keywords;            // optional allowlist
  std::optional<sentiment::Lexicon> lexicon;          // optional scorer
};

struct InputSummary {
  std::string path;
  corpus::IngestSummary ingest;
  corpus::PreprocessSummary preprocess;
};

struct PipelineResult {
  std::vector<TopicReport> reports;  // sorted by (topic, platform)
  std::vector<InputSummary> inputs;  // in input order
  RunManifest manifest;
};

/// ingest -> preprocess -> resolve sentiments -> chain -> dynamics -> write
/// tables, plot data, report.json, manifest.json and a config copy into
/// output_dir. Deterministic given inputs and config (manifest timestamp
/// aside). Fatal errors carry the failing stage in the message.
PipelineResult run_pipeline(const PipelineOptions& options);

/// Reads report.json and config.json from an existing bundle, correlates
/// demographics and platform-mechanism indicators against the platform
/// emotion aggregates, writes correlations.csv, and returns the CSV text.
std::string run_dynamics(const std::string& bundle_dir);

/// FNV-1a 64-bit content digest, hex (manifest bookkeeping, not crypto).
std::string fnv1a_hex(std::string_view bytes);

}  // namespace emochain::report
