#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "voltext/common/time.h"

namespace voltext::volatility {

// Intraday log-returns for one session, in percent (100 x log price ratio).
struct IntradayDay {
  Date date;
  std::vector<double> returns;
};

double compute_rv(std::span<const double> r);
// (pi/2) sum |r_i||r_{i+1}|. Throws TooFewReturns when fewer than 2 returns.
double compute_bpv(std::span<const double> r);
// (positive part, negative part); zero returns count toward neither.
std::pair<double, double> compute_semivariance(std::span<const double> r);
// (M/3) sum r^4.
double compute_rq(std::span<const double> r);

struct DailyVolRecord {
  Date date;
  double rv = 0.0;
  double bpv = 0.0;
  double jump = 0.0;
  double rv_pos = 0.0;
  double rv_neg = 0.0;
  double rq = 0.0;
};

// rv is stored as rv_pos + rv_neg so the split adds up exactly.
DailyVolRecord realized_measures(const IntradayDay& day);
std::vector<DailyVolRecord> realized_measures(std::span<const IntradayDay> days);

struct PriceTick {
  Timestamp time;
  double price = 0.0;
};

// CSV `timestamp,price`; a header row is skipped. Ticks are sorted by time.
std::vector<PriceTick> read_price_csv(const std::filesystem::path& path);

// Samples each regular session (09:30-16:00 US Eastern, weekdays) onto a
// grid of `grid_minutes` using the last tick at or before each grid time; grid
// times before the first tick of the session take the first tick. Sessions
// with fewer than `min_ticks` ticks are dropped.
std::vector<IntradayDay> session_returns(std::span<const PriceTick> ticks, int grid_minutes = 5,
                                         std::size_t min_ticks = 2);

// CSV `date,rv,bpv,jump,rv_pos,rv_neg,rq`.
void write_records_csv(std::span<const DailyVolRecord> records, const std::filesystem::path& path);
std::vector<DailyVolRecord> read_records_csv(const std::filesystem::path& path);

}  // namespace voltext::volatility
