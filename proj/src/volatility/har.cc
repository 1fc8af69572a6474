#include "voltext/volatility/har.h"

#include <algorithm>
#include <cmath>

#include "voltext/common/error.h"

namespace voltext::volatility {

std::string to_string(HarFamily f) {
  switch (f) {
    case HarFamily::kAR1: return "AR1";
    case HarFamily::kHAR: return "HAR";
    case HarFamily::kHARJ: return "HARJ";
    case HarFamily::kCHAR: return "CHAR";
    case HarFamily::kSHAR: return "SHAR";
    case HarFamily::kARQ: return "ARQ";
    case HarFamily::kHARQ: return "HARQ";
    case HarFamily::kHARQF: return "HARQF";
  }
  return "?";
}

HarFamily parse_har_family(std::string s) {
  std::string k;
  for (char c : s) {
    if (c != '-' && c != '_') k.push_back(char(std::toupper(static_cast<unsigned char>(c))));
  }
  for (auto f : kAllHarFamilies) {
    if (to_string(f) == k) return f;
  }
  fail(ErrorCode::kInvalidArgument, "unknown HAR model '" + s + "'");
}

namespace {

template <class Get>
double trailing_mean(std::span<const DailyVolRecord> h, std::size_t t, int window, Get get) {
  double s = 0.0;
  for (std::size_t i = t + 1 - std::size_t(window); i <= t; ++i) s += get(h[i]);
  return s / double(window);
}

}  // namespace

std::vector<double> build_har_features(std::span<const DailyVolRecord> h, const HarSpec& spec,
                                       std::size_t t) {
  if (t >= h.size()) fail(ErrorCode::kInvalidArgument, "feature day beyond history");
  if (t + 1 < spec.min_history()) {
    fail(ErrorCode::kInsufficientHistory, "need " + std::to_string(spec.min_history()) +
                                              " records up to the feature day, have " +
                                              std::to_string(t + 1));
  }
  auto rv = [](const DailyVolRecord& r) { return r.rv; };
  auto bpv = [](const DailyVolRecord& r) { return r.bpv; };
  auto rq = [](const DailyVolRecord& r) { return r.rq; };
  auto mean = [&](auto get, int lag) { return trailing_mean(h, t, lag, get); };
  const auto [d, w, m] = spec.lags;

  std::vector<double> x{1.0};
  auto har = [&] {
    x.push_back(mean(rv, d));
    x.push_back(mean(rv, w));
    x.push_back(mean(rv, m));
  };
  switch (spec.family) {
    case HarFamily::kAR1:
      x.push_back(h[t].rv);
      break;
    case HarFamily::kHAR:
      har();
      break;
    case HarFamily::kHARJ:
      har();
      x.push_back(h[t].jump);
      break;
    case HarFamily::kCHAR:
      x.push_back(mean(bpv, d));
      x.push_back(mean(bpv, w));
      x.push_back(mean(bpv, m));
      break;
    case HarFamily::kSHAR:
      x.push_back(h[t].rv_pos);
      x.push_back(h[t].rv_neg);
      x.push_back(mean(rv, w));
      x.push_back(mean(rv, m));
      break;
    case HarFamily::kARQ:
      x.push_back(h[t].rv);
      x.push_back(h[t].rv * std::sqrt(h[t].rq));
      break;
    case HarFamily::kHARQ:
      har();
      x.push_back(mean(rv, d) * std::sqrt(mean(rq, d)));
      break;
    case HarFamily::kHARQF:
      har();
      x.push_back(mean(rv, d) * std::sqrt(mean(rq, d)));
      x.push_back(mean(rv, w) * std::sqrt(mean(rq, w)));
      x.push_back(mean(rv, m) * std::sqrt(mean(rq, m)));
      break;
  }
  return x;
}

std::vector<double> build_har_features(std::span<const DailyVolRecord> h, const HarSpec& spec,
                                       Date t) {
  auto it = std::find_if(h.begin(), h.end(), [&](const DailyVolRecord& r) { return r.date == t; });
  if (it == h.end()) fail(ErrorCode::kInvalidArgument, "no record dated " + format_date(t));
  return build_har_features(h, spec, std::size_t(it - h.begin()));
}

std::vector<std::string> har_feature_names(const HarSpec& spec) {
  std::vector<std::string> n{"const"};
  auto add = [&](std::initializer_list<const char*> xs) { n.insert(n.end(), xs.begin(), xs.end()); };
  switch (spec.family) {
    case HarFamily::kAR1: add({"rv_d"}); break;
    case HarFamily::kHAR: add({"rv_d", "rv_w", "rv_m"}); break;
    case HarFamily::kHARJ: add({"rv_d", "rv_w", "rv_m", "jump_d"}); break;
    case HarFamily::kCHAR: add({"bpv_d", "bpv_w", "bpv_m"}); break;
    case HarFamily::kSHAR: add({"rv_pos_d", "rv_neg_d", "rv_w", "rv_m"}); break;
    case HarFamily::kARQ: add({"rv_d", "rv_d*sqrt(rq_d)"}); break;
    case HarFamily::kHARQ: add({"rv_d", "rv_w", "rv_m", "rv_d*sqrt(rq_d)"}); break;
    case HarFamily::kHARQF:
      add({"rv_d", "rv_w", "rv_m", "rv_d*sqrt(rq_d)", "rv_w*sqrt(rq_w)", "rv_m*sqrt(rq_m)"});
      break;
  }
  return n;
}

}  // namespace voltext::volatility
