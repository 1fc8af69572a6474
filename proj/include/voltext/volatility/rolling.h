#pragma once

#include <span>
#include <string>
#include <vector>

#include "voltext/common/forecast_series.h"
#include "voltext/common/parallel.h"
#include "voltext/volatility/har.h"

namespace voltext::volatility {

struct RollingProtocol {
  std::size_t train_len = 2046;
  std::size_t oos_len = 300;
  bool strict = false;  // passed to ols_fit
};

// Replaces a forecast outside [min, max] of the training targets with their
// mean.
double insanity_filter(double forecast, std::span<const double> train_rvs);

struct RollingDiagnostics {
  std::size_t filtered = 0;
  std::vector<std::vector<double>> coefficients;  // one per OOS day
};

// The last oos_len records are forecast one at a time. The forecast for
// record d is fitted on the train_len targets d-train_len..d-1 (features of
// the day before each target) and evaluated on the features of day d-1, so
// nothing dated d or later is used. Windows are independent and are fitted in
// parallel under Exec::kParallel; both modes give identical output.
// Throws InsufficientHistory when records.size() < train_len + oos_len + 21.
ForecastSeries rolling_forecast(std::span<const DailyVolRecord> records, const HarSpec& spec,
                                const RollingProtocol& protocol, Exec exec = Exec::kParallel,
                                RollingDiagnostics* diag = nullptr);

}  // namespace voltext::volatility
