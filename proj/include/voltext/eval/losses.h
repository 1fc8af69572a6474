#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voltext/common/forecast_series.h"

namespace voltext::eval {

enum class Loss { kMSE, kQLIKE, kMDA };

std::string to_string(Loss l);
Loss parse_loss(const std::string& s);

// Direction reference for MDA: the previous actual (default) or the previous
// forecast.
enum class MdaReference { kPreviousActual, kPreviousForecast };

double qlike(double actual, double forecast);  // throws NonPositiveForecast

double mse(const ForecastSeries& s);
double qlike(const ForecastSeries& s);
// Fraction of days t >= 1 where sign(f_t - ref_{t-1}) = sign(a_t - a_{t-1}).
// Throws TooShort for fewer than two days.
double mda(const ForecastSeries& s, MdaReference ref = MdaReference::kPreviousActual);

// Loss for a series, optionally restricted to `days` (indices into s).
double score(const ForecastSeries& s, Loss loss, std::span<const std::size_t> days = {},
             MdaReference ref = MdaReference::kPreviousActual);

// Per-day losses (MDA: 1 for a missed direction, 0 for a hit; day 0 is 0).
std::vector<double> daily_losses(const ForecastSeries& s, Loss loss,
                                 MdaReference ref = MdaReference::kPreviousActual);

struct DaySplit {
  std::vector<std::size_t> normal_idx;
  std::vector<std::size_t> jump_idx;
  double q1 = 0.0, q3 = 0.0, threshold = 0.0;
};

// Jump day iff actual > Q3 + 1.5 IQR, quantiles (type 7) over `actual`, or
// over `reference` when given (e.g. the training window).
DaySplit classify_days(std::span<const double> actual,
                       std::optional<std::span<const double>> reference = std::nullopt);

}  // namespace voltext::eval
