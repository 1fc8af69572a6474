#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "voltext/common/time.h"
#include "voltext/embedding/config.h"
#include "voltext/eval/bootstrap.h"
#include "voltext/eval/losses.h"
#include "voltext/eval/report.h"
#include "voltext/explain/quadrature.h"
#include "voltext/nlpml/config.h"
#include "voltext/textprep/phrases.h"
#include "voltext/volatility/har.h"
#include "voltext/volatility/rolling.h"

namespace voltext::pipeline {

// Paths as written in the file; relative ones are taken from the directory
// holding the config.
struct PathsConfig {
  std::string corpus = "news.jsonl";
  std::string prices = "prices";    // directory of <TICKER>.csv
  std::string rules;                 // empty: bundled catalogue
  std::string embeddings;            // empty: train one in the run
  std::string outputs = "runs";
};

struct NewsConfig {
  LocalCutoff cutoff;
  std::string tag_template = "about:{ticker}";
  int grid_minutes = 5;

  std::string tag_for(const std::string& ticker) const;
};

struct PhraseStage {
  bool enabled = true;
  textprep::PhraseOptions options;
};

struct NamedCnn {
  std::string name;
  nlpml::CnnConfig config;
};

struct EvaluationConfig {
  std::vector<eval::Loss> losses{eval::Loss::kMSE, eval::Loss::kQLIKE, eval::Loss::kMDA};
  std::vector<eval::Panel> panels{eval::Panel::kAll, eval::Panel::kNormal, eval::Panel::kJump};
  std::string reference = "CHAR";  // benchmark the deltas are taken against
  eval::RealityCheckOptions rc;
};

struct ExplainConfig {
  bool enabled = true;
  std::vector<std::string> tokens;
  explain::QuadratureSpec quadrature;
  std::size_t max_days = 20;  // per-day reports for the first OOS days
};

struct PipelineConfig {
  std::uint64_t seed = 1;
  bool strict = false;
  PathsConfig paths;
  std::vector<std::string> tickers;
  NewsConfig news;
  PhraseStage phrases;
  embedding::TrainConfig embedding;
  volatility::RollingProtocol protocol;
  std::vector<volatility::HarFamily> har_models{std::begin(volatility::kAllHarFamilies),
                                                std::end(volatility::kAllHarFamilies)};
  std::vector<NamedCnn> cnn{{"cnn", {}}};
  EvaluationConfig evaluation;
  ExplainConfig explain;

  std::filesystem::path base_dir = ".";

  std::filesystem::path resolve(const std::string& p) const;
  std::filesystem::path rules_path() const;
  std::filesystem::path price_path(const std::string& ticker) const;

  // Throws ConfigError. With check_paths, also requires the corpus, rules,
  // price files and any pretrained embedding to exist.
  void validate(bool check_paths = true) const;
};

// Throws ConfigError with line:column of the offending node.
PipelineConfig parse_config(const std::string& yaml_text,
                            const std::filesystem::path& base_dir = ".",
                            const std::string& origin = "<config>");
PipelineConfig load_config(const std::filesystem::path& path);
std::string to_yaml(const PipelineConfig& config);

}  // namespace voltext::pipeline
