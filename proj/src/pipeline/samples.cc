#include "voltext/pipeline/samples.h"

#include "voltext/common/error.h"
#include "voltext/nlpml/input.h"
#include "voltext/textprep/daily.h"

namespace voltext::pipeline {

std::vector<std::vector<std::string>> news_windows(
    const std::vector<textprep::RawNewsItem>& items, const std::string& tag_filter,
    const std::vector<Date>& trading_days, const LocalCutoff& cutoff,
    const std::vector<textprep::CleanRule>& rules,
    const std::vector<textprep::PhraseModel>& phrases) {
  std::vector<std::vector<std::string>> out;
  out.reserve(trading_days.size());
  for (std::size_t i = 0; i < trading_days.size(); ++i) {
    const Date day = trading_days[i];
    const Timestamp start = i == 0 ? cutoff.on(day - std::chrono::days(1)) : cutoff.on(trading_days[i - 1]);
    out.push_back(textprep::aggregate_window(items, tag_filter, start, cutoff.on(day), rules, phrases));
  }
  return out;
}

std::vector<nlpml::Sample> build_samples(const std::vector<volatility::DailyVolRecord>& records,
                                         const std::vector<std::vector<std::string>>& windows,
                                         const embedding::WordVectors& wv,
                                         const nlpml::CnnConfig& config) {
  if (windows.size() != records.size()) {
    fail(ErrorCode::kShapeMismatch, "one news window per record is required");
  }
  const auto n_days = std::size_t(config.input_days);
  const auto max_len = std::size_t(config.max_len);
  std::vector<nlpml::Sample> samples;
  for (std::size_t i = n_days - 1; i < records.size(); ++i) {
    nlpml::Sample s;
    s.date = records[i].date;
    s.target = records[i].rv;
    if (n_days == 1) {
      s.input = nlpml::build_day_input(windows[i], wv, max_len);
    } else {
      std::vector<std::vector<std::string>> days(windows.begin() + std::ptrdiff_t(i + 1 - n_days),
                                                 windows.begin() + std::ptrdiff_t(i + 1));
      s.input = nlpml::multi_day_input(days, wv, n_days, max_len);
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace voltext::pipeline
