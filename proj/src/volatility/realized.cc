#include "voltext/volatility/realized.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>

#include "voltext/common/csv.h"
#include "voltext/common/error.h"

namespace voltext::volatility {

double compute_rv(std::span<const double> r) {
  double s = 0.0;
  for (double x : r) s += x * x;
  return s;
}

double compute_bpv(std::span<const double> r) {
  if (r.size() < 2) {
    fail(ErrorCode::kTooFewReturns, "bipower variation needs at least 2 returns, got " +
                                        std::to_string(r.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) s += std::abs(r[i]) * std::abs(r[i + 1]);
  return std::numbers::pi / 2.0 * s;
}

std::pair<double, double> compute_semivariance(std::span<const double> r) {
  double pos = 0.0, neg = 0.0;
  for (double x : r) {
    if (x > 0) pos += x * x;
    else if (x < 0) neg += x * x;
  }
  return {pos, neg};
}

double compute_rq(std::span<const double> r) {
  double s = 0.0;
  for (double x : r) s += x * x * x * x;
  return double(r.size()) / 3.0 * s;
}

DailyVolRecord realized_measures(const IntradayDay& day) {
  DailyVolRecord rec;
  rec.date = day.date;
  std::tie(rec.rv_pos, rec.rv_neg) = compute_semivariance(day.returns);
  rec.rv = rec.rv_pos + rec.rv_neg;
  rec.bpv = compute_bpv(day.returns);
  rec.jump = std::max(rec.rv - rec.bpv, 0.0);
  rec.rq = compute_rq(day.returns);
  return rec;
}

std::vector<DailyVolRecord> realized_measures(std::span<const IntradayDay> days) {
  std::vector<DailyVolRecord> out;
  out.reserve(days.size());
  for (const auto& d : days) out.push_back(realized_measures(d));
  return out;
}

std::vector<PriceTick> read_price_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<PriceTick> ticks;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty()) continue;
    auto f = split_line(t, ',');
    if (f.size() < 2) {
      fail(ErrorCode::kFormatError, path.string() + ":" + std::to_string(lineno) + ": expected timestamp,price");
    }
    if (lineno == 1 && trim(f[0]) == "timestamp") continue;
    PriceTick tick{parse_timestamp(trim(f[0])), parse_double(f[1])};
    if (!(tick.price > 0) || !std::isfinite(tick.price)) {
      fail(ErrorCode::kFormatError, path.string() + ":" + std::to_string(lineno) + ": price must be positive");
    }
    ticks.push_back(tick);
  }
  std::stable_sort(ticks.begin(), ticks.end(),
                   [](const PriceTick& a, const PriceTick& b) { return a.time < b.time; });
  return ticks;
}

std::vector<IntradayDay> session_returns(std::span<const PriceTick> ticks, int grid_minutes,
                                         std::size_t min_ticks) {
  using std::chrono::minutes;
  constexpr minutes kOpen{9 * 60 + 30};
  constexpr minutes kClose{16 * 60};
  if (grid_minutes <= 0 || (kClose - kOpen).count() % grid_minutes != 0) {
    fail(ErrorCode::kInvalidArgument, "grid must divide the 390-minute session");
  }
  std::map<Date, std::vector<PriceTick>> sessions;
  for (const auto& t : ticks) {
    auto tod = eastern_time_of_day(t.time);
    Date d = eastern_date(t.time);
    if (!is_weekday(d) || tod < kOpen || tod > kClose) continue;
    sessions[d].push_back(t);
  }
  std::vector<IntradayDay> out;
  for (const auto& [date, st] : sessions) {
    if (st.size() < min_ticks) continue;
    IntradayDay day{date, {}};
    std::size_t k = 0;
    double prev = 0.0;
    for (minutes g = kOpen; g <= kClose; g += minutes(grid_minutes)) {
      Timestamp at = eastern_to_utc(date, g);
      while (k < st.size() && st[k].time <= at) ++k;
      double p = k == 0 ? st.front().price : st[k - 1].price;
      if (g != kOpen) day.returns.push_back(100.0 * std::log(p / prev));
      prev = p;
    }
    out.push_back(std::move(day));
  }
  return out;
}

void write_records_csv(std::span<const DailyVolRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << "date,rv,bpv,jump,rv_pos,rv_neg,rq\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  format_date(r.date).c_str(), r.rv, r.bpv, r.jump, r.rv_pos, r.rv_neg, r.rq);
    out << buf;
  }
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

std::vector<DailyVolRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<DailyVolRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty() || (lineno == 1 && t.starts_with("date"))) continue;
    auto f = split_line(t, ',');
    if (f.size() != 7) {
      fail(ErrorCode::kFormatError, path.string() + ":" + std::to_string(lineno) + ": expected 7 columns");
    }
    out.push_back({parse_date(trim(f[0])), parse_double(f[1]), parse_double(f[2]),
                   parse_double(f[3]), parse_double(f[4]), parse_double(f[5]),
                   parse_double(f[6])});
  }
  return out;
}

}  // namespace voltext::volatility
