#include "voltext/eval/report.h"

#include <cstdio>
#include <ostream>

#include "voltext/common/error.h"
#include "voltext/common/stats.h"

namespace voltext::eval {

std::string to_string(Panel p) {
  switch (p) {
    case Panel::kAll: return "all";
    case Panel::kNormal: return "normal";
    case Panel::kJump: return "jump";
  }
  return "?";
}

std::vector<std::size_t> panel_days(const ForecastSeries& s, Panel panel) {
  if (panel == Panel::kAll) {
    std::vector<std::size_t> all(s.size());
    for (std::size_t t = 0; t < s.size(); ++t) all[t] = t;
    return all;
  }
  auto split = classify_days(s.actual);
  return panel == Panel::kJump ? split.jump_idx : split.normal_idx;
}

DeltaSummary delta_aggregate(std::span<const ForecastSeries> models,
                             std::span<const ForecastSeries> benchmarks, Loss loss, Panel panel) {
  if (models.size() != benchmarks.size()) {
    fail(ErrorCode::kShapeMismatch, "need one benchmark series per model series");
  }
  DeltaSummary out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    check_aligned(models[i], benchmarks[i]);
    auto days = panel_days(models[i], panel);
    if (days.empty() || (loss == Loss::kMDA && days.size() == 1 && days[0] == 0)) continue;
    out.per_ticker.push_back(score(models[i], loss, days) - score(benchmarks[i], loss, days));
  }
  if (out.per_ticker.empty()) fail(ErrorCode::kTooShort, "no ticker has days in this panel");
  out.avg = stats::mean(out.per_ticker);
  out.med = stats::median(out.per_ticker);
  return out;
}

ForecastSeries ensemble_mean(const ForecastSeries& a, const ForecastSeries& b) {
  check_aligned(a, b);
  ForecastSeries out;
  out.ticker = a.ticker;
  out.model_id = a.model_id == b.model_id ? a.model_id : a.model_id + "+" + b.model_id;
  for (std::size_t t = 0; t < a.size(); ++t) {
    out.push_back(a.dates[t], a.actual[t], (a.forecast[t] + b.forecast[t]) / 2.0);
  }
  return out;
}

std::vector<PanelRow> panel_table(std::span<const TickerForecasts> tickers,
                                  std::span<const Loss> losses, std::span<const Panel> panels,
                                  const RealityCheckOptions& rc) {
  if (tickers.empty()) fail(ErrorCode::kInvalidArgument, "no tickers");
  std::vector<PanelRow> rows;
  for (Loss loss : losses) {
    for (Panel panel : panels) {
      PanelRow row;
      row.model = tickers.front().candidate.model_id;
      row.loss = loss;
      row.panel = panel;
      std::vector<ForecastSeries> cand, ref;
      std::size_t rej05 = 0, rej10 = 0, tested = 0;
      for (const auto& t : tickers) {
        if (t.reference >= t.benchmarks.size()) fail(ErrorCode::kInvalidArgument, "bad reference benchmark");
        auto days = panel_days(t.candidate, panel);
        if (days.size() < 2) continue;
        cand.push_back(t.candidate);
        ref.push_back(t.benchmarks[t.reference]);
        RealityCheckOptions o = rc;
        o.loss = loss;
        auto r = reality_check(t.candidate, t.benchmarks, o, days);
        ++tested;
        rej05 += r.p_value < 0.05;
        rej10 += r.p_value < 0.10;
      }
      if (tested == 0) continue;
      auto delta = delta_aggregate(cand, ref, loss, panel);
      row.avg = delta.avg;
      row.med = delta.med;
      row.rc05 = double(rej05) / double(tested);
      row.rc10 = double(rej10) / double(tested);
      row.tickers = tested;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_panel_csv(std::span<const PanelRow> rows, std::ostream& out) {
  out << "model,loss,panel,avg_delta,med_delta,rc_5pct,rc_10pct,tickers\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.10g,%.10g,%.4f,%.4f,%zu\n", r.model.c_str(),
                  to_string(r.loss).c_str(), to_string(r.panel).c_str(), r.avg, r.med, r.rc05,
                  r.rc10, r.tickers);
    out << buf;
  }
}

void write_panel_text(std::span<const PanelRow> rows, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %-6s %-7s %12s %12s %7s %7s\n", "model", "loss", "panel",
                "Avg", "Med", "RC 5%", "RC 10%");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-12s %-6s %-7s %12.5g %12.5g %6.1f%% %6.1f%%\n", r.model.c_str(),
                  to_string(r.loss).c_str(), to_string(r.panel).c_str(), r.avg, r.med,
                  100 * r.rc05, 100 * r.rc10);
    out << buf;
  }
}

}  // namespace voltext::eval
