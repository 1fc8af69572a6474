#pragma once

#include <cstdint>
#include <utility>
#include <filesystem>
#include <string>
#include <vector>

#include "voltext/pipeline/config.h"
#include "voltext/common/time.h"
#include "voltext/textprep/news.h"
#include "voltext/volatility/realized.h"

namespace voltext::pipeline {

struct SynthSpec {
  std::vector<std::string> tickers{"AAA"};
  std::size_t n_days = 300;  // business days
  std::string start_date = "2012-01-02";
  int intraday_m = 78;       // returns per session; must divide 390 minutes

  // Daily log-volatility (of percent returns) follows an AR(1):
  // h_t = mu + phi (h_{t-1} - mu) + eta e_t.
  double log_vol_mean = 0.0;
  double log_vol_phi = 0.9;
  double log_vol_eta = 0.15;
  double jump_prob = 0.08;  // per-day probability of a jump day
  double jump_size = 5.0;   // percent, one intraday return of +-jump_size

  // News: Poisson(headlines_per_day) headlines per ticker and news window.
  // Each headline draws words_per_headline words from one of n_topics
  // disjoint topics splitting vocab_size words. A planted headline is the
  // marker followed by words of a separate alert topic.
  double headlines_per_day = 3.0;
  int words_per_headline = 7;
  int vocab_size = 120;
  int n_topics = 6;
  int alert_words = 8;
  std::string marker = "shockwave";
  double p_signal = 0.9;   // marker planted before a jump day
  double p_false = 0.0;    // marker planted before a normal day

  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthLabel {
  std::string ticker;
  Date date;
  bool jump = false;
  bool marker = false;
};

struct SynthData {
  std::vector<textprep::RawNewsItem> news;
  std::vector<std::pair<std::string, std::vector<volatility::PriceTick>>> prices;
  std::vector<double> log_vol;  // per ticker and day, ticker-major
  std::vector<SynthLabel> labels;
  std::vector<Date> days;
};

SynthData generate_synthetic(const SynthSpec& spec);

// news.jsonl, prices/<TICKER>.csv and labels.csv under `dir`.
void write_synthetic(const SynthData& data, const std::filesystem::path& dir);

std::vector<std::string> synthetic_vocabulary(int n);

// Pipeline configuration for data written by write_synthetic: small
// embeddings, the marker tracked, the last tenth of the usable days OOS.
PipelineConfig synthetic_config(const SynthSpec& spec);

}  // namespace voltext::pipeline
