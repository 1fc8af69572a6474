#pragma once

#include <string>
#include <vector>

#include "voltext/common/time.h"
#include "voltext/textprep/clean.h"
#include "voltext/textprep/news.h"
#include "voltext/textprep/phrases.h"

namespace voltext::textprep {

// Turns one headline into tokens: clean_text, tokenize, flatten sentences,
// then phrase merges in pass order. Headlines rejected by clean_text yield
// an empty list.
std::vector<std::string> headline_tokens(const std::string& headline,
                                         const std::vector<CleanRule>& rules,
                                         const std::vector<PhraseModel>& phrases = {});

// `tag_filter` is one tag ("about:aapl") or several joined with '+'
// ("hot+subject:politics"), all of which must be present. Empty matches all.
bool matches_tags(const RawNewsItem& item, const std::string& tag_filter);

// Headline tokens of matching items with start <= timestamp < end, in
// timestamp order (input order for ties). Bodies are ignored.
std::vector<std::string> aggregate_window(const std::vector<RawNewsItem>& items,
                                          const std::string& tag_filter, Timestamp start,
                                          Timestamp end, const std::vector<CleanRule>& rules,
                                          const std::vector<PhraseModel>& phrases = {});

// The news day `day` runs from the cutoff on `day` to the cutoff on the next
// calendar day (09:30 ET to 09:30 ET by default).
std::vector<std::string> aggregate_daily_headlines(
    const std::vector<RawNewsItem>& items, const std::string& tag_filter, Date day,
    const LocalCutoff& cutoff, const std::vector<CleanRule>& rules,
    const std::vector<PhraseModel>& phrases = {});

}  // namespace voltext::textprep
