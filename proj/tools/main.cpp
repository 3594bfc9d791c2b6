// emochain: group emotion analytics over social-media interaction datasets.
//
// Subcommands:
//   compute      run the full pipeline and write a report bundle
//   dynamics     correlate dynamics indicators over an existing bundle
//   synth        generate a seeded synthetic dataset with planted truth
//   oracle-check verify engine output against the brute-force oracle

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "emochain/chain.hpp"
#include "emochain/config.hpp"
#include "emochain/corpus.hpp"
#include "emochain/errors.hpp"
#include "emochain/reporting.hpp"
#include "emochain/sentiment.hpp"
#include "emochain/synth.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("EMOCHAIN_LOG");
  if (!env) return 1;
  return std::atoi(env);
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "emochain: " << msg << "\n";
}

int run_compute(const std::vector<std::string>& inputs,
                const std::string& config_path, const std::string& out_dir,
                const std::vector<std::string>& topics,
                const std::string& lexicon_json, const std::string& lexicon_pos,
                const std::string& lexicon_neg) {
  emochain::report::PipelineOptions options;
  options.input_paths = inputs;
  options.config_path = config_path;
  options.output_dir = out_dir;
  options.topic_keywords = topics;
  if (!lexicon_json.empty())
    options.lexicon = emochain::sentiment::load_lexicon_json(lexicon_json);
  else if (!lexicon_pos.empty() || !lexicon_neg.empty())
    options.lexicon =
        emochain::sentiment::load_lexicon_tsv(lexicon_pos, lexicon_neg);
  const auto result = emochain::report::run_pipeline(options);
  for (const auto& input : result.inputs) {
    const auto& s = input.ingest;
    const std::size_t dropped = s.lines_malformed + s.accounts.dropped() +
                                s.posts.dropped() + s.comments.dropped();
    if (dropped > 0)
      std::cerr << "emochain: warning: " << input.path << ": skipped "
                << s.lines_malformed << " malformed line(s), "
                << s.accounts.dropped() << " account(s), " << s.posts.dropped()
                << " post(s), " << s.comments.dropped() << " comment(s)\n";
    if (input.preprocess.posts_filtered > 0)
      info(input.path + ": keyword filter removed " +
           std::to_string(input.preprocess.posts_filtered) + " post(s)");
  }
  info("wrote bundle with " + std::to_string(result.reports.size()) +
       " topic-platform report(s) to " + out_dir);
  return 0;
}

int run_synth(const std::string& spec_path, std::uint64_t seed, bool seed_given,
              const std::string& out_path) {
  emochain::synth::SynthSpec spec = emochain::synth::load_spec(spec_path);
  if (seed_given) spec.seed = seed;
  const auto generated = emochain::synth::generate(spec);
  emochain::corpus::write_dataset_jsonl(generated.dataset, out_path);
  const std::string truth_path = out_path + ".truth.json";
  {
    std::ofstream out(truth_path, std::ios::binary | std::ios::trunc);
    if (!out) throw emochain::io_error("cannot write truth file: " + truth_path);
    out << emochain::synth::truth_to_json(generated.truth);
  }
  info("generated " + std::to_string(generated.truth.posts) + " posts / " +
       std::to_string(generated.truth.first_level_comments +
                      generated.truth.second_level_comments) +
       " comments (seed " + std::to_string(spec.seed) + ")");
  return 0;
}

int run_oracle_check(const std::string& input, const std::string& config_path) {
  const auto cfg = emochain::config::load_config(config_path);
  const auto ingested = emochain::corpus::ingest_dataset(input);
  const auto& chain_cfg =
      emochain::config::config_for_platform(cfg, ingested.dataset.platform);
  const auto engine = emochain::chain::compute_chain(ingested.dataset, chain_cfg);
  const auto oracle =
      emochain::synth::oracle_recompute(ingested.dataset, chain_cfg);

  if (engine.posts.size() != oracle.posts.size()) {
    std::cerr << "oracle-check: post count mismatch (engine "
              << engine.posts.size() << ", oracle " << oracle.posts.size()
              << ")\n";
    return 1;
  }
  double max_diff = 0.0;
  for (std::size_t i = 0; i < engine.posts.size(); ++i) {
    if (engine.posts[i].post_id != oracle.posts[i].post_id) {
      std::cerr << "oracle-check: post order mismatch at index " << i << "\n";
      return 1;
    }
    max_diff = std::max(max_diff,
                        std::abs(engine.posts[i].value - oracle.posts[i].value));
  }
  if (engine.topic_value.has_value() != oracle.topic_value.has_value()) {
    std::cerr << "oracle-check: topic value definedness mismatch\n";
    return 1;
  }
  if (engine.topic_value)
    max_diff = std::max(max_diff,
                        std::abs(*engine.topic_value - *oracle.topic_value));
  std::cout << "oracle-check: " << engine.posts.size()
            << " post value(s), max |engine - oracle| = " << max_diff << "\n";
  if (max_diff > 1e-9) {
    std::cerr << "oracle-check: difference exceeds 1e-9\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group emotion analytics over social-media interaction data"};
  app.set_version_flag("--version",
                       "emochain " + emochain::report::tool_version());
  app.require_subcommand(1);

  auto* compute = app.add_subcommand(
      "compute", "run the full pipeline and write a report bundle");
  std::vector<std::string> inputs;
  std::string config_path, out_dir, lexicon_json, lexicon_pos, lexicon_neg;
  std::vector<std::string> topics;
  compute->add_option("--input", inputs, "input JSONL dataset(s)")
      ->required()
      ->expected(-1);
  compute->add_option("--config", config_path, "engine config (JSON)")
      ->required();
  compute->add_option("--out", out_dir, "output bundle directory")->required();
  compute->add_option("--topics", topics,
                      "keyword allowlist; posts matching none are dropped");
  compute->add_option("--lexicon", lexicon_json,
                      "lexicon JSON with positive/negative maps");
  compute->add_option("--lexicon-pos", lexicon_pos,
                      "positive class token<TAB>count file");
  compute->add_option("--lexicon-neg", lexicon_neg,
                      "negative class token<TAB>count file");

  auto* dynamics = app.add_subcommand(
      "dynamics", "correlate dynamics indicators over an existing bundle");
  std::string bundle_dir;
  dynamics->add_option("--bundle", bundle_dir, "bundle directory")->required();

  auto* synth = app.add_subcommand(
      "synth", "generate a seeded synthetic dataset with planted truth");
  std::string spec_path, synth_out;
  std::uint64_t seed = 0;
  synth->add_option("--spec", spec_path, "synth spec (JSON)")->required();
  auto* seed_opt = synth->add_option("--seed", seed, "override the spec seed");
  synth->add_option("--out", synth_out, "output JSONL path")->required();

  auto* oracle = app.add_subcommand(
      "oracle-check", "verify engine output against the brute-force oracle");
  std::string oracle_input, oracle_config;
  oracle->add_option("--input", oracle_input, "input JSONL dataset")->required();
  oracle->add_option("--config", oracle_config, "engine config (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed())
      return run_compute(inputs, config_path, out_dir, topics, lexicon_json,
                         lexicon_pos, lexicon_neg);
    if (dynamics->parsed()) {
      std::cout << emochain::report::run_dynamics(bundle_dir);
      return 0;
    }
    if (synth->parsed())
      return run_synth(spec_path, seed, seed_opt->count() > 0, synth_out);
    if (oracle->parsed()) return run_oracle_check(oracle_input, oracle_config);
  } catch (const std::exception& e) {
    std::cerr << "emochain: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
