#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "voltext/common/forecast_series.h"
#include "voltext/eval/bootstrap.h"
#include "voltext/eval/losses.h"

namespace voltext::eval {

enum class Panel { kAll, kNormal, kJump };
std::string to_string(Panel p);

// Days of `s` in the panel; the split uses the series' own actuals.
std::vector<std::size_t> panel_days(const ForecastSeries& s, Panel panel);

struct DeltaSummary {
  double avg = 0.0;
  double med = 0.0;
  std::vector<double> per_ticker;
};

// Per ticker: loss(model) - loss(benchmark) on the panel's days; models[i]
// pairs with benchmarks[i]. Negative is better for MSE and QLIKE, positive
// for MDA. Tickers with an empty panel are skipped.
DeltaSummary delta_aggregate(std::span<const ForecastSeries> models,
                             std::span<const ForecastSeries> benchmarks, Loss loss,
                             Panel panel = Panel::kAll);

// (a + b) / 2 day by day. Throws MisalignedSeries.
ForecastSeries ensemble_mean(const ForecastSeries& a, const ForecastSeries& b);

// All forecasts of one ticker: the candidate and its benchmark set.
struct TickerForecasts {
  std::string ticker;
  ForecastSeries candidate;
  std::vector<ForecastSeries> benchmarks;
  std::size_t reference = 0;  // benchmark used for the deltas (CHAR)
};

struct PanelRow {
  std::string model;
  Loss loss = Loss::kMSE;
  Panel panel = Panel::kAll;
  double avg = 0.0;
  double med = 0.0;
  double rc05 = 0.0;  // share of tickers where the reality check rejects at 5%
  double rc10 = 0.0;
  std::size_t tickers = 0;
};

// Avg/Med deltas against the reference benchmark plus reality-check rejection
// rates, per loss and panel.
std::vector<PanelRow> panel_table(std::span<const TickerForecasts> tickers,
                                  std::span<const Loss> losses, std::span<const Panel> panels,
                                  const RealityCheckOptions& rc);

void write_panel_csv(std::span<const PanelRow> rows, std::ostream& out);
void write_panel_text(std::span<const PanelRow> rows, std::ostream& out);

}  // namespace voltext::eval
