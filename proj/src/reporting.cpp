#include "emochain/reporting.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "emochain/errors.hpp"

namespace emochain::report {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

template <typename F>
auto with_stage(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const config_error& e) {
    throw config_error(stage + ": " + e.what());
  } catch (const io_error& e) {
    throw io_error(stage + ": " + e.what());
  } catch (const contract_error& e) {
    throw contract_error(stage + ": " + e.what());
  }
}

std::string fmt4(double v) {
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fmt4_or_dash(const std::optional<double>& v) {
  return v ? fmt4(*v) : "—";
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += "\"";
  return out;
}

std::string sanitize(std::string_view label) {
  std::string out;
  for (char ch : label) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '-';
    out.push_back(keep ? ch : '_');
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write file: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw io_error("write failure: " + path.string());
}

std::string now_utc_iso8601() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json emotion_json(const chain::ClusterEmotion& ce) {
  return json{{"density", ce.density},     {"trust", ce.trust},
              {"mean_emotion", ce.mean_emotion}, {"value", ce.value},
              {"t1", ce.t1},               {"t2", ce.t2},
              {"t3_fan", ce.t3_fan},       {"t3_repost", ce.t3_repost}};
}

struct PlatformAggregates {
  std::optional<double> mean_emotion;
  std::optional<double> skewness_mav;
  std::optional<double> mean_no_comment_share;
  std::optional<double> mean_celebrity_share;
};

std::optional<double> mean_of_defined(const std::vector<std::optional<double>>& vs) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : vs) {
    if (!v) continue;
    sum += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::map<std::string, PlatformAggregates> platform_aggregates(
    std::span<const TopicReport> reports) {
  std::map<std::string, std::vector<const TopicReport*>> by_platform;
  for (const TopicReport& r : reports) by_platform[r.platform].push_back(&r);
  std::map<std::string, PlatformAggregates> out;
  for (const auto& [platform, rows] : by_platform) {
    PlatformAggregates agg;
    std::vector<std::optional<double>> emotions, no_comment, celebrity;
    std::vector<dynamics::SkewnessResult> skew_rows;
    for (const TopicReport* r : rows) {
      emotions.push_back(r->group_emotion);
      no_comment.push_back(r->indicators.no_comment_share);
      celebrity.push_back(r->indicators.celebrity_share);
      skew_rows.push_back(r->skewness);
    }
    agg.mean_emotion = mean_of_defined(emotions);
    agg.skewness_mav = dynamics::mean_absolute_skewness(skew_rows);
    agg.mean_no_comment_share = mean_of_defined(no_comment);
    agg.mean_celebrity_share = mean_of_defined(celebrity);
    out[platform] = agg;
  }
  return out;
}

std::string render_report_json(std::span<const TopicReport> reports) {
  json datasets = json::array();
  for (const TopicReport& r : reports) {
    json posts = json::array();
    for (const chain::PostGroupEmotion& p : r.posts) {
      json micros = json::array();
      for (const chain::ClusterEmotion& m : p.micros)
        micros.push_back(emotion_json(m));
      posts.push_back(json{{"id", p.post_id},
                           {"value", p.value},
                           {"macro", emotion_json(p.macro)},
                           {"micros", micros}});
    }
    json clusters = json::array();
    for (const ClusterRow& row : r.cluster_rows) {
      clusters.push_back(json{{"rank", row.rank},
                              {"normalized_size", row.normalized_size},
                              {"emotion_value", row.emotion_value},
                              {"post_id", row.post_id}});
    }
    datasets.push_back(json{
        {"topic", r.topic},
        {"platform", r.platform},
        {"group_emotion", optional_json(r.group_emotion)},
        {"polarity",
         json{{"positive_count", r.polarity.positive_count},
              {"negative_count", r.polarity.negative_count},
              {"positive_share", optional_json(r.polarity.positive_share())},
              {"negative_share", optional_json(r.polarity.negative_share())}}},
        {"skewness", optional_json(r.skewness.coefficient)},
        {"no_comment_share", optional_json(r.indicators.no_comment_share)},
        {"celebrity_share", optional_json(r.indicators.celebrity_share)},
        {"posts", posts},
        {"clusters", clusters}});
  }
  json platforms = json::object();
  for (const auto& [platform, agg] : platform_aggregates(reports)) {
    platforms[platform] =
        json{{"mean_emotion", optional_json(agg.mean_emotion)},
             {"skewness_mav", optional_json(agg.skewness_mav)},
             {"mean_no_comment_share", optional_json(agg.mean_no_comment_share)},
             {"mean_celebrity_share", optional_json(agg.mean_celebrity_share)}};
  }
  return json{{"datasets", datasets}, {"platforms", platforms}}.dump(2) + "\n";
}

std::string render_polarity_csv(std::span<const TopicReport> reports) {
  std::string out =
      "topic,platform,positive_count,negative_count,positive_share,"
      "negative_share\n";
  for (const TopicReport& r : reports) {
    out += csv_escape(r.topic) + "," + csv_escape(r.platform) + "," +
           std::to_string(r.polarity.positive_count) + "," +
           std::to_string(r.polarity.negative_count) + "," +
           fmt4_or_dash(r.polarity.positive_share()) + "," +
           fmt4_or_dash(r.polarity.negative_share()) + "\n";
  }
  return out;
}

std::string render_indicators_csv(std::span<const TopicReport> reports) {
  std::string out = "topic,platform,no_comment_share,celebrity_share\n";
  for (const TopicReport& r : reports) {
    out += csv_escape(r.topic) + "," + csv_escape(r.platform) + "," +
           fmt4_or_dash(r.indicators.no_comment_share) + "," +
           fmt4_or_dash(r.indicators.celebrity_share) + "\n";
  }
  return out;
}

// Topic x platform pivot with a trailing MAV row (mean absolute coefficient
// per platform).
std::string render_skewness_csv(std::span<const TopicReport> reports) {
  std::set<std::string> topics, platforms;
  std::map<std::pair<std::string, std::string>, std::optional<double>> cells;
  std::map<std::string, std::vector<dynamics::SkewnessResult>> per_platform;
  for (const TopicReport& r : reports) {
    topics.insert(r.topic);
    platforms.insert(r.platform);
    cells[{r.topic, r.platform}] = r.skewness.coefficient;
    per_platform[r.platform].push_back(r.skewness);
  }
  std::string out = "topic";
  for (const auto& p : platforms) out += "," + csv_escape(p);
  out += "\n";
  for (const auto& t : topics) {
    out += csv_escape(t);
    for (const auto& p : platforms) {
      auto it = cells.find({t, p});
      out += "," + (it == cells.end() ? std::string("—")
                                      : fmt4_or_dash(it->second));
    }
    out += "\n";
  }
  out += "MAV";
  for (const auto& p : platforms)
    out += "," + fmt4_or_dash(dynamics::mean_absolute_skewness(per_platform[p]));
  out += "\n";
  return out;
}

std::string correlation_row(const dynamics::CorrelationResult& c) {
  std::string note;
  if (c.n < 5) note = "n<5: significance not computable";
  std::string r_cell = c.r ? fmt4(*c.r) : "—";
  return csv_escape(c.x_name) + "," + csv_escape(c.y_name) + "," + r_cell +
         "," + std::to_string(c.n) + "," + csv_escape(note) + "\n";
}

}  // namespace

std::string tool_version() { return kVersion; }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TopicReport build_topic_report(const corpus::InteractionDataset& ds,
                               const chain::ChainResult& chain_result,
                               bool skewness_adjusted) {
  TopicReport report;
  report.topic = ds.topic;
  report.platform = ds.platform;
  report.group_emotion = chain_result.topic_value;
  report.posts = chain_result.posts;

  std::vector<double> values;
  values.reserve(chain_result.posts.size());
  for (const chain::PostGroupEmotion& p : chain_result.posts)
    values.push_back(p.value);
  report.polarity = dynamics::tally_polarity(values);
  report.skewness = {ds.topic, ds.platform,
                     dynamics::compute_skewness(values, skewness_adjusted)};
  report.indicators = {ds.topic, ds.platform, dynamics::no_comment_share(ds),
                       dynamics::celebrity_share(ds)};

  for (std::size_t i = 0; i < chain_result.clusters.macros.size(); ++i) {
    ClusterRow row;
    row.normalized_size = chain_result.posts[i].macro.density;
    row.emotion_value = chain_result.posts[i].value;
    row.post_id = chain_result.posts[i].post_id;
    report.cluster_rows.push_back(std::move(row));
  }
  std::sort(report.cluster_rows.begin(), report.cluster_rows.end(),
            [](const ClusterRow& a, const ClusterRow& b) {
              if (a.emotion_value != b.emotion_value)
                return a.emotion_value < b.emotion_value;
              return a.post_id < b.post_id;
            });
  for (std::size_t i = 0; i < report.cluster_rows.size(); ++i)
    report.cluster_rows[i].rank = i + 1;
  return report;
}

std::string format_emotion_table(std::span<const TopicReport> reports) {
  std::set<std::string> topics, platforms;
  std::map<std::pair<std::string, std::string>, std::optional<double>> cells;
  for (const TopicReport& r : reports) {
    topics.insert(r.topic);
    platforms.insert(r.platform);
    cells[{r.topic, r.platform}] = r.group_emotion;
  }
  std::string out = "topic";
  for (const auto& p : platforms) out += "," + csv_escape(p);
  out += "\n";
  std::map<std::string, std::pair<double, std::size_t>> column_sum;
  for (const auto& t : topics) {
    out += csv_escape(t);
    for (const auto& p : platforms) {
      auto it = cells.find({t, p});
      const bool defined = it != cells.end() && it->second.has_value();
      const double value = defined ? *it->second : 0.0;
      out += "," + (defined ? fmt4(value) : std::string("\u2014"));
      if (defined) {
        column_sum[p].first += value;
        ++column_sum[p].second;
      }
    }
    out += "\n";
  }
  out += "Average";
  for (const auto& p : platforms) {
    auto it = column_sum.find(p);
    if (it == column_sum.end() || it->second.second == 0) {
      out += ",—";
    } else {
      out += "," + fmt4(it->second.first /
                        static_cast<double>(it->second.second));
    }
  }
  out += "\n";
  return out;
}

std::string export_cluster_plot_data(const TopicReport& report) {
  if (report.cluster_rows.empty())
    throw contract_error("no clusters to export for topic '" + report.topic + "'");
  std::string out = "rank,normalized_size,emotion_value\n";
  for (const ClusterRow& row : report.cluster_rows) {
    out += std::to_string(row.rank) + "," + fmt4(row.normalized_size) + "," +
           fmt4(row.emotion_value) + "\n";
  }
  return out;
}

PipelineResult run_pipeline(const PipelineOptions& options) {
  PipelineResult result;
  const config::EngineConfig cfg = with_stage(
      "config", [&] { return config::load_config(options.config_path); });
  const std::string config_bytes =
      with_stage("config", [&] { return read_file(options.config_path); });

  result.manifest.tool_version = std::string("emochain ") + kVersion;
  result.manifest.config_hash = fnv1a_hex(config_bytes);
  result.manifest.timestamp = now_utc_iso8601();

  std::set<std::pair<std::string, std::string>> seen_keys;
  for (const std::string& path : options.input_paths) {
    const std::string bytes =
        with_stage("ingest", [&] { return read_file(path); });
    result.manifest.inputs.emplace_back(path, fnv1a_hex(bytes));

    corpus::IngestResult ingested =
        with_stage("ingest", [&] { return corpus::ingest_dataset(path); });
    corpus::PreprocessResult pre = with_stage("preprocess", [&] {
      return corpus::preprocess(ingested.dataset, options.topic_keywords);
    });
    result.inputs.push_back({path, ingested.summary, pre.summary});
    const corpus::InteractionDataset resolved = with_stage("sentiment", [&] {
      return sentiment::resolve_sentiments(
          pre.dataset, options.lexicon ? &*options.lexicon : nullptr);
    });
    const chain::ChainResult chained = with_stage("chain", [&] {
      return chain::compute_chain(
          resolved, config::config_for_platform(cfg, resolved.platform));
    });
    TopicReport report = with_stage("dynamics", [&] {
      return build_topic_report(resolved, chained, cfg.skewness_adjusted);
    });
    if (!seen_keys.insert({report.topic, report.platform}).second)
      throw io_error("ingest: duplicate dataset for topic '" + report.topic +
                     "' on platform '" + report.platform + "' (" + path + ")");
    result.reports.push_back(std::move(report));
  }

  std::sort(result.reports.begin(), result.reports.end(),
            [](const TopicReport& a, const TopicReport& b) {
              return std::tie(a.topic, a.platform) < std::tie(b.topic, b.platform);
            });

  with_stage("write", [&] {
    const fs::path out_dir(options.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create output directory: " + out_dir.string());

    write_file(out_dir / "topic_emotions.csv",
               format_emotion_table(result.reports));
    write_file(out_dir / "polarity.csv", render_polarity_csv(result.reports));
    write_file(out_dir / "skewness.csv", render_skewness_csv(result.reports));
    write_file(out_dir / "indicators.csv",
               render_indicators_csv(result.reports));
    for (const TopicReport& r : result.reports) {
      if (r.cluster_rows.empty()) continue;
      write_file(out_dir / ("clusters_" + sanitize(r.topic) + "_" +
                            sanitize(r.platform) + ".csv"),
                 export_cluster_plot_data(r));
    }
    write_file(out_dir / "report.json", render_report_json(result.reports));
    write_file(out_dir / "config.json", config_bytes);

    json inputs = json::array();
    for (const auto& [path, digest] : result.manifest.inputs)
      inputs.push_back(json{{"path", path}, {"digest", digest}});
    const json manifest{{"tool_version", result.manifest.tool_version},
                        {"config_hash", result.manifest.config_hash},
                        {"inputs", inputs},
                        {"timestamp", result.manifest.timestamp}};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  });
  return result;
}

std::string run_dynamics(const std::string& bundle_dir) {
  const fs::path dir(bundle_dir);
  const json report = with_stage("dynamics", [&] {
    const std::string bytes = read_file((dir / "report.json").string());
    json j = json::parse(bytes, nullptr, false);
    if (j.is_discarded())
      throw io_error("bundle report.json is not valid JSON");
    return j;
  });
  const config::EngineConfig cfg = with_stage("dynamics", [&] {
    return config::load_config((dir / "config.json").string());
  });

  struct PlatformStats {
    std::optional<double> mean_emotion, skewness_mav, no_comment, celebrity;
  };
  std::map<std::string, PlatformStats> stats;
  if (report.contains("platforms")) {
    for (const auto& [platform, agg] : report["platforms"].items()) {
      auto opt = [&](const char* key) -> std::optional<double> {
        if (!agg.contains(key) || agg[key].is_null()) return std::nullopt;
        return agg[key].get<double>();
      };
      stats[platform] = {opt("mean_emotion"), opt("skewness_mav"),
                         opt("mean_no_comment_share"),
                         opt("mean_celebrity_share")};
    }
  }

  std::string out = "x,y,r,n,note\n";

  // demographics vs platform mean emotion
  static constexpr const char* kBuckets[] = {
      "junior_high_or_below", "senior_high", "bachelor_or_above",
      "le25",                 "a26_35",      "ge36"};
  std::vector<corpus::PlatformProfile> profiles;
  std::vector<double> emotions;
  for (const auto& [platform, s] : stats) {
    const corpus::PlatformProfile* profile =
        config::profile_for_platform(cfg, platform);
    if (!profile || !s.mean_emotion) continue;
    profiles.push_back(*profile);
    emotions.push_back(*s.mean_emotion);
  }
  for (const char* bucket : kBuckets)
    out += correlation_row(
        dynamics::correlate_demographics(profiles, emotions, bucket));

  // platform-mechanism indicators vs polarization (skewness MAV)
  auto indicator_row = [&](const char* name,
                           std::optional<double> PlatformStats::*member) {
    std::vector<double> xs, ys;
    for (const auto& [platform, s] : stats) {
      if (!(s.*member) || !s.skewness_mav) continue;
      xs.push_back(*(s.*member));
      ys.push_back(*s.skewness_mav);
    }
    dynamics::CorrelationResult c = dynamics::compute_pearson(xs, ys);
    c.x_name = name;
    c.y_name = "skewness_mav";
    out += correlation_row(c);
  };
  indicator_row("no_comment_share", &PlatformStats::no_comment);
  indicator_row("celebrity_share", &PlatformStats::celebrity);

  with_stage("write",
             [&] { write_file(dir / "correlations.csv", out); });
  return out;
}

}  // namespace emochain::report
