#include "voltext/eval/bootstrap.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "voltext/common/error.h"

namespace voltext::eval {

std::uint64_t draw_block_length(Rng& rng, double avg_block) {
  if (!(avg_block >= 1.0)) fail(ErrorCode::kInvalidArgument, "average block length must be >= 1");
  if (avg_block == 1.0) return 1;
  std::geometric_distribution<std::uint64_t> geo(1.0 / avg_block);
  return 1 + geo(rng);
}

std::vector<std::size_t> stationary_bootstrap_indices(std::size_t n, double avg_block, Rng& rng) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "cannot resample an empty series");
  std::vector<std::size_t> idx;
  idx.reserve(n);
  while (idx.size() < n) {
    std::size_t start = std::size_t(uniform_index(rng, n));
    std::uint64_t len = draw_block_length(rng, avg_block);
    for (std::uint64_t j = 0; j < len && idx.size() < n; ++j) idx.push_back((start + j) % n);
  }
  return idx;
}

void check_aligned(const ForecastSeries& a, const ForecastSeries& b) {
  a.validate();
  b.validate();
  if (a.dates != b.dates) {
    fail(ErrorCode::kMisalignedSeries, "'" + a.model_id + "' and '" + b.model_id + "' cover different dates");
  }
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a.actual[t] != b.actual[t]) {
      fail(ErrorCode::kMisalignedSeries, "actuals differ on " + format_date(a.dates[t]));
    }
  }
}

RealityCheckResult reality_check_differentials(const std::vector<std::vector<double>>& d,
                                               const RealityCheckOptions& opt, Exec exec) {
  const std::size_t n = d.size();
  if (n < 2) fail(ErrorCode::kTooShort, "reality check needs at least 2 days");
  const std::size_t k = d.front().size();
  if (k == 0) fail(ErrorCode::kInvalidArgument, "no benchmarks");
  for (const auto& row : d) {
    if (row.size() != k) fail(ErrorCode::kShapeMismatch, "ragged differential matrix");
  }
  if (opt.n_boot == 0) fail(ErrorCode::kInvalidArgument, "n_boot must be positive");

  RealityCheckResult r;
  r.n_bootstrap = opt.n_boot;
  r.avg_block = opt.avg_block;
  r.mean_differentials.assign(k, 0.0);
  for (const auto& row : d) {
    for (std::size_t j = 0; j < k; ++j) r.mean_differentials[j] += row[j];
  }
  for (auto& m : r.mean_differentials) m /= double(n);
  const auto& mean = r.mean_differentials;
  r.statistic = *std::min_element(mean.begin(), mean.end());

  // Bootstrap means, one row per replicate.
  std::vector<double> boot(opt.n_boot * k, 0.0);
  auto replicate = [&](std::size_t b) {
    Rng rng = stream_rng(opt.seed, b);
    auto idx = stationary_bootstrap_indices(n, opt.avg_block, rng);
    double* out = boot.data() + b * k;
    for (auto t : idx) {
      for (std::size_t j = 0; j < k; ++j) out[j] += d[t][j];
    }
    for (std::size_t j = 0; j < k; ++j) out[j] /= double(n);
  };
  if (exec == Exec::kSerial) {
    for (std::size_t b = 0; b < opt.n_boot; ++b) replicate(b);
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < std::ptrdiff_t(opt.n_boot); ++b) replicate(std::size_t(b));
  }

  std::vector<double> shift(k, 0.0);
  if (opt.recentering == Recentering::kConsistent) {
    const double scale = std::sqrt(2.0 * std::log(std::max(std::log(double(n)), 1.0 + 1e-12)));
    for (std::size_t j = 0; j < k; ++j) {
      double s2 = 0.0;
      for (std::size_t b = 0; b < opt.n_boot; ++b) {
        const double e = boot[b * k + j] - mean[j];
        s2 += e * e;
      }
      const double se = std::sqrt(s2 / double(opt.n_boot));
      const double excess = mean[j] - r.statistic;
      if (excess > scale * se) shift[j] = excess;
    }
  }
  std::size_t exceed = 0;
  for (std::size_t b = 0; b < opt.n_boot; ++b) {
    double v = INFINITY;
    for (std::size_t j = 0; j < k; ++j) v = std::min(v, boot[b * k + j] - mean[j] + shift[j]);
    if (v >= r.statistic) ++exceed;
  }
  r.p_value = double(exceed) / double(opt.n_boot);
  return r;
}

RealityCheckResult reality_check(const ForecastSeries& candidate,
                                 std::span<const ForecastSeries> benchmarks,
                                 const RealityCheckOptions& options,
                                 std::span<const std::size_t> days, Exec exec) {
  if (benchmarks.empty()) fail(ErrorCode::kInvalidArgument, "no benchmarks");
  for (const auto& b : benchmarks) check_aligned(candidate, b);
  auto l0 = daily_losses(candidate, options.loss, options.mda_reference);
  std::vector<std::vector<double>> lk;
  for (const auto& b : benchmarks) lk.push_back(daily_losses(b, options.loss, options.mda_reference));
  std::vector<std::size_t> all;
  if (days.empty()) {
    for (std::size_t t = 0; t < candidate.size(); ++t) all.push_back(t);
    days = all;
  }
  std::vector<std::vector<double>> d;
  d.reserve(days.size());
  for (auto t : days) {
    if (t >= candidate.size()) fail(ErrorCode::kInvalidArgument, "day index out of range");
    std::vector<double> row(benchmarks.size());
    for (std::size_t j = 0; j < benchmarks.size(); ++j) row[j] = lk[j][t] - l0[t];
    d.push_back(std::move(row));
  }
  return reality_check_differentials(d, options, exec);
}

}  // namespace voltext::eval
