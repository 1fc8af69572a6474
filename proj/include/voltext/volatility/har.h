#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "voltext/volatility/realized.h"

namespace voltext::volatility {

enum class HarFamily { kAR1, kHAR, kHARJ, kCHAR, kSHAR, kARQ, kHARQ, kHARQF };

inline constexpr std::array<HarFamily, 8> kAllHarFamilies = {
    HarFamily::kAR1, HarFamily::kHAR,  HarFamily::kHARJ, HarFamily::kCHAR,
    HarFamily::kSHAR, HarFamily::kARQ, HarFamily::kHARQ, HarFamily::kHARQF};

std::string to_string(HarFamily f);
// Case-insensitive; accepts "har-j", "harq-f" and friends.
HarFamily parse_har_family(std::string s);

struct HarSpec {
  HarFamily family = HarFamily::kHAR;
  // Daily, weekly, monthly averaging windows; trailing means include day t.
  std::array<int, 3> lags{1, 7, 21};

  std::size_t min_history() const { return std::size_t(lags[2]); }
};

// Regressors (leading intercept included) for forecasting RV on the day after
// history[t], computed from history[0..t] only:
//   AR1    RV_t
//   HAR    RV_d, RV_w, RV_m
//   HARJ   HAR + J_t
//   CHAR   BPV_d, BPV_w, BPV_m
//   SHAR   RV+_t, RV-_t, RV_w, RV_m
//   ARQ    RV_t, RV_t sqrt(RQ_t)
//   HARQ   HAR + RV_d sqrt(RQ_d)
//   HARQF  HAR + RV_d sqrt(RQ_d), RV_w sqrt(RQ_w), RV_m sqrt(RQ_m)
// Throws InsufficientHistory when t + 1 < lags[2].
std::vector<double> build_har_features(std::span<const DailyVolRecord> history, const HarSpec& spec,
                                       std::size_t t);
// Same, with t located by date.
std::vector<double> build_har_features(std::span<const DailyVolRecord> history, const HarSpec& spec,
                                       Date t);

std::vector<std::string> har_feature_names(const HarSpec& spec);

}  // namespace voltext::volatility
