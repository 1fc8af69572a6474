#include "voltext/eval/losses.h"

#include <cmath>

#include "voltext/common/error.h"
#include "voltext/common/stats.h"

namespace voltext::eval {

std::string to_string(Loss l) {
  switch (l) {
    case Loss::kMSE: return "MSE";
    case Loss::kQLIKE: return "QLIKE";
    case Loss::kMDA: return "MDA";
  }
  return "?";
}

Loss parse_loss(const std::string& s) {
  std::string k;
  for (char c : s) k.push_back(char(std::toupper(static_cast<unsigned char>(c))));
  if (k == "MSE") return Loss::kMSE;
  if (k == "QLIKE") return Loss::kQLIKE;
  if (k == "MDA") return Loss::kMDA;
  fail(ErrorCode::kInvalidArgument, "unknown loss '" + s + "'");
}

double qlike(double actual, double forecast) {
  if (!(forecast > 0)) {
    fail(ErrorCode::kNonPositiveForecast, "QLIKE needs a positive forecast, got " + std::to_string(forecast));
  }
  if (!(actual > 0)) {
    fail(ErrorCode::kInvalidArgument, "QLIKE needs a positive actual, got " + std::to_string(actual));
  }
  const double x = actual / forecast;
  return x - std::log(x) - 1.0;
}

namespace {

int sign(double x) { return (x > 0) - (x < 0); }

bool direction_hit(const ForecastSeries& s, std::size_t t, MdaReference ref) {
  const double base = ref == MdaReference::kPreviousActual ? s.actual[t - 1] : s.forecast[t - 1];
  return sign(s.forecast[t] - base) == sign(s.actual[t] - s.actual[t - 1]);
}

}  // namespace

std::vector<double> daily_losses(const ForecastSeries& s, Loss loss, MdaReference ref) {
  s.validate();
  std::vector<double> out(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) {
    switch (loss) {
      case Loss::kMSE: {
        const double e = s.actual[t] - s.forecast[t];
        out[t] = e * e;
        break;
      }
      case Loss::kQLIKE:
        out[t] = qlike(s.actual[t], s.forecast[t]);
        break;
      case Loss::kMDA:
        out[t] = t == 0 ? 0.0 : (direction_hit(s, t, ref) ? 0.0 : 1.0);
        break;
    }
  }
  return out;
}

double mse(const ForecastSeries& s) { return score(s, Loss::kMSE); }
double qlike(const ForecastSeries& s) { return score(s, Loss::kQLIKE); }
double mda(const ForecastSeries& s, MdaReference ref) { return score(s, Loss::kMDA, {}, ref); }

double score(const ForecastSeries& s, Loss loss, std::span<const std::size_t> days,
             MdaReference ref) {
  s.validate();
  std::vector<std::size_t> all;
  if (days.empty()) {
    for (std::size_t t = 0; t < s.size(); ++t) all.push_back(t);
    days = all;
  }
  if (loss == Loss::kMDA) {
    std::size_t hits = 0, n = 0;
    for (auto t : days) {
      if (t >= s.size()) fail(ErrorCode::kInvalidArgument, "day index out of range");
      if (t == 0) continue;
      ++n;
      hits += direction_hit(s, t, ref);
    }
    if (n == 0) fail(ErrorCode::kTooShort, "MDA needs at least two consecutive days");
    return double(hits) / double(n);
  }
  if (days.empty()) fail(ErrorCode::kTooShort, "no days to score");
  double sum = 0.0;
  for (auto t : days) {
    if (t >= s.size()) fail(ErrorCode::kInvalidArgument, "day index out of range");
    if (loss == Loss::kMSE) {
      const double e = s.actual[t] - s.forecast[t];
      sum += e * e;
    } else {
      sum += qlike(s.actual[t], s.forecast[t]);
    }
  }
  return sum / double(days.size());
}

DaySplit classify_days(std::span<const double> actual,
                       std::optional<std::span<const double>> reference) {
  auto ref = reference ? *reference : actual;
  if (ref.empty()) fail(ErrorCode::kTooShort, "no values to take quantiles from");
  DaySplit split;
  split.q1 = stats::quantile(ref, 0.25);
  split.q3 = stats::quantile(ref, 0.75);
  split.threshold = split.q3 + 1.5 * (split.q3 - split.q1);
  for (std::size_t t = 0; t < actual.size(); ++t) {
    (actual[t] > split.threshold ? split.jump_idx : split.normal_idx).push_back(t);
  }
  return split;
}

}  // namespace voltext::eval
