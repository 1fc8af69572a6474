#include "voltext/textprep/daily.h"

#include <algorithm>
#include <chrono>

#include "voltext/common/error.h"
#include "voltext/textprep/tokenize.h"

namespace voltext::textprep {

std::vector<std::string> headline_tokens(const std::string& headline,
                                         const std::vector<CleanRule>& rules,
                                         const std::vector<PhraseModel>& phrases) {
  std::string cleaned;
  try {
    cleaned = clean_text(headline, rules);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTooShort || e.code() == ErrorCode::kEmptyAfterClean) return {};
    throw;
  }
  std::vector<std::string> tokens;
  for (auto& sentence : tokenize(cleaned)) {
    for (const auto& model : phrases) model.apply(sentence);
    for (auto& t : sentence) tokens.push_back(std::move(t));
  }
  return tokens;
}

bool matches_tags(const RawNewsItem& item, const std::string& tag_filter) {
  std::size_t start = 0;
  while (start < tag_filter.size()) {
    auto plus = tag_filter.find('+', start);
    auto tag = tag_filter.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
    if (!tag.empty() && !item.has_tag(tag)) return false;
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return true;
}

std::vector<std::string> aggregate_window(const std::vector<RawNewsItem>& items,
                                          const std::string& tag_filter, Timestamp start,
                                          Timestamp end, const std::vector<CleanRule>& rules,
                                          const std::vector<PhraseModel>& phrases) {
  std::vector<const RawNewsItem*> selected;
  for (const auto& item : items) {
    if (item.timestamp < start || item.timestamp >= end) continue;
    if (!matches_tags(item, tag_filter)) continue;
    selected.push_back(&item);
  }
  std::stable_sort(selected.begin(), selected.end(),
                   [](const RawNewsItem* a, const RawNewsItem* b) {
                     return a->timestamp < b->timestamp;
                   });
  std::vector<std::string> tokens;
  for (const auto* item : selected) {
    for (auto& t : headline_tokens(item->headline, rules, phrases)) tokens.push_back(std::move(t));
  }
  return tokens;
}

std::vector<std::string> aggregate_daily_headlines(
    const std::vector<RawNewsItem>& items, const std::string& tag_filter, Date day,
    const LocalCutoff& cutoff, const std::vector<CleanRule>& rules,
    const std::vector<PhraseModel>& phrases) {
  return aggregate_window(items, tag_filter, cutoff.on(day),
                          cutoff.on(day + std::chrono::days{1}), rules, phrases);
}

}  // namespace voltext::textprep
