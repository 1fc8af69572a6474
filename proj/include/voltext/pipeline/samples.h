#pragma once

#include <string>
#include <vector>

#include "voltext/common/time.h"
#include "voltext/embedding/model.h"
#include "voltext/nlpml/config.h"
#include "voltext/nlpml/trainer.h"
#include "voltext/textprep/clean.h"
#include "voltext/textprep/news.h"
#include "voltext/textprep/phrases.h"
#include "voltext/volatility/realized.h"

namespace voltext::pipeline {

// Headline tokens available before the session of each trading day:
// [cutoff(previous trading day), cutoff(day)), so weekend and holiday news
// rolls into the next session. The first day's window starts one calendar
// day before its cutoff.
std::vector<std::vector<std::string>> news_windows(
    const std::vector<textprep::RawNewsItem>& items, const std::string& tag_filter,
    const std::vector<Date>& trading_days, const LocalCutoff& cutoff,
    const std::vector<textprep::CleanRule>& rules,
    const std::vector<textprep::PhraseModel>& phrases = {});

// One sample per record from index input_days-1 on: the last input_days
// windows up to and including the record's own, targeting its RV.
std::vector<nlpml::Sample> build_samples(const std::vector<volatility::DailyVolRecord>& records,
                                         const std::vector<std::vector<std::string>>& windows,
                                         const embedding::WordVectors& wv,
                                         const nlpml::CnnConfig& config);

}  // namespace voltext::pipeline
