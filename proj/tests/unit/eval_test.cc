#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "voltext/common/error.h"
#include "voltext/common/rng.h"
#include "voltext/eval/bootstrap.h"
#include "voltext/eval/losses.h"
#include "voltext/eval/report.h"

using namespace voltext;
using namespace voltext::eval;

namespace {

ForecastSeries make(const std::vector<double>& a, const std::vector<double>& f) {
  ForecastSeries s;
  for (std::size_t i = 0; i < a.size(); ++i) s.push_back(parse_date("2016-01-01") + std::chrono::days(i), a[i], f[i]);
  return s;
}

ForecastSeries noisy(Rng& rng, const std::vector<double>& a, double sd) {
  std::normal_distribution<double> z(0.0, sd);
  std::vector<double> f(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) f[i] = a[i] + z(rng);
  return make(a, f);
}

}  // namespace

TEST(Losses, QlikeAndMse) {
  EXPECT_NEAR(qlike(2.0, 1.0), 2.0 - std::log(2.0) - 1.0, 1e-15);
  EXPECT_EQ(qlike(3.0, 3.0), 0.0);
  try {
    qlike(1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPositiveForecast);
  }
  const auto s = make({1, 2, 3}, {1, 4, 2});
  EXPECT_DOUBLE_EQ(mse(s), (0.0 + 4.0 + 1.0) / 3.0);
  EXPECT_DOUBLE_EQ(score(s, Loss::kMSE, std::vector<std::size_t>{1}), 4.0);
}

TEST(Losses, Mda) {
  // Actual moves: up, down, up. Forecast directions vs previous actual: up, up, down.
  const auto s = make({1, 2, 1, 3}, {9, 3, 3, 0.5});
  EXPECT_DOUBLE_EQ(mda(s), 1.0 / 3.0);
  // Against the previous forecast: down, flat, down. No hits.
  EXPECT_DOUBLE_EQ(mda(s, MdaReference::kPreviousForecast), 0.0);
  const auto daily = daily_losses(s, Loss::kMDA);
  EXPECT_EQ(daily, (std::vector<double>{0, 0, 1, 1}));
  EXPECT_THROW(mda(make({1}, {1})), Error);
  EXPECT_EQ(parse_loss(to_string(Loss::kQLIKE)), Loss::kQLIKE);
}

TEST(Losses, JumpSplitUsesTukeyFence) {
  // Type-7 quartiles of 1..8 are 2.75 and 6.25; the fence is 11.5.
  std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 11.5, 12};
  const std::vector<double> ref{1, 2, 3, 4, 5, 6, 7, 8};
  const auto split = classify_days(a, std::span<const double>(ref));
  EXPECT_DOUBLE_EQ(split.q1, 2.75);
  EXPECT_DOUBLE_EQ(split.q3, 6.25);
  EXPECT_DOUBLE_EQ(split.threshold, 11.5);
  EXPECT_EQ(split.jump_idx, (std::vector<std::size_t>{9}));
  EXPECT_EQ(split.normal_idx.size(), 9u);
}

TEST(Bootstrap, IndicesFollowBlocks) {
  Rng rng(1);
  const auto idx = stationary_bootstrap_indices(50, 5.0, rng);
  ASSERT_EQ(idx.size(), 50u);
  std::size_t continuations = 0;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    EXPECT_LT(idx[i], 50u);
    continuations += idx[i] == (idx[i - 1] + 1) % 50;
  }
  // About 4 in 5 steps continue a block.
  EXPECT_GT(continuations, 25u);
}

TEST(Bootstrap, BlockLengthIsGeometric) {
  Rng rng(2);
  std::vector<int> hist(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto l = draw_block_length(rng, 4.0);
    ASSERT_GE(l, 1u);
    if (l <= 3) ++hist[l];
  }
  EXPECT_NEAR(hist[1] / double(n), 0.25, 0.01);
  EXPECT_NEAR(hist[2] / double(n), 0.25 * 0.75, 0.01);
}

TEST(RealityCheck, SerialEqualsParallel) {
  Rng rng(3);
  std::vector<double> a(200);
  for (auto& v : a) v = uniform(rng, 1, 2);
  const auto cand = noisy(rng, a, 0.5);
  const std::vector<ForecastSeries> bench{noisy(rng, a, 0.6), noisy(rng, a, 0.7)};
  RealityCheckOptions opt;
  opt.n_boot = 300;
  const auto x = reality_check(cand, bench, opt, {}, Exec::kSerial);
  const auto y = reality_check(cand, bench, opt, {}, Exec::kParallel);
  EXPECT_EQ(x.p_value, y.p_value);
  EXPECT_EQ(x.statistic, y.statistic);
  EXPECT_EQ(x.n_bootstrap, 300u);
}

TEST(RealityCheck, TieWithBestBenchmarkIsNotRejected) {
  Rng rng(4);
  std::vector<double> a(300);
  for (auto& v : a) v = uniform(rng, 1, 2);
  const auto cand = noisy(rng, a, 0.5);
  std::vector<ForecastSeries> bench{cand};
  for (int k = 0; k < 5; ++k) bench.push_back(noisy(rng, a, 2.0));
  RealityCheckOptions opt;
  const auto r = reality_check(cand, bench, opt);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_GT(r.p_value, 0.3);
}

TEST(RealityCheck, MisalignedSeries) {
  const auto a = make({1, 2, 3}, {1, 2, 3});
  auto b = make({1, 2, 3}, {1, 2, 3});
  b.dates[1] += std::chrono::days(1);
  std::vector<ForecastSeries> bench{b};
  try {
    reality_check(a, bench, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMisalignedSeries);
  }
}

TEST(RealityCheck, DifferentialsOverload) {
  std::vector<std::vector<double>> d(100, std::vector<double>{1.0, 2.0});
  RealityCheckOptions opt;
  opt.n_boot = 200;
  const auto r = reality_check_differentials(d, opt);
  EXPECT_DOUBLE_EQ(r.statistic, 1.0);
  EXPECT_EQ(r.mean_differentials, (std::vector<double>{1.0, 2.0}));
  // Zero-variance positive differentials: bootstrap statistics never reach V.
  EXPECT_LT(r.p_value, 0.01);
}

TEST(Report, DeltasAndEnsemble) {
  const auto m = make({1, 2, 3}, {1, 2, 4});
  const auto b = make({1, 2, 3}, {2, 2, 3});
  const std::vector<ForecastSeries> ms{m}, bs{b};
  const auto d = delta_aggregate(ms, bs, Loss::kMSE);
  EXPECT_DOUBLE_EQ(d.avg, 0.0);
  const std::vector<ForecastSeries> self{m};
  EXPECT_EQ(delta_aggregate(self, self, Loss::kQLIKE).avg, 0.0);
  const auto e = ensemble_mean(m, b);
  EXPECT_EQ(e.forecast, (std::vector<double>{1.5, 2.0, 3.5}));
}

TEST(Report, PanelTableRows) {
  Rng rng(5);
  std::vector<TickerForecasts> tickers;
  for (int t = 0; t < 3; ++t) {
    std::vector<double> a(120);
    for (auto& v : a) v = uniform(rng, 1, 2);
    a[50] = 30.0;
    a[80] = 25.0;
    TickerForecasts tf;
    tf.ticker = "T" + std::to_string(t);
    tf.candidate = noisy(rng, a, 0.1);
    for (auto& f : tf.candidate.forecast) f = std::max(f, 0.1);
    tf.benchmarks = {make(a, std::vector<double>(a.size(), 1.5))};
    tickers.push_back(tf);
  }
  const std::vector<Loss> losses{Loss::kMSE, Loss::kQLIKE};
  const std::vector<Panel> panels{Panel::kAll, Panel::kJump};
  RealityCheckOptions rc;
  rc.n_boot = 200;
  const auto rows = panel_table(tickers, losses, panels, rc);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.tickers, 3u);
    EXPECT_GE(r.rc05, 0.0);
    EXPECT_LE(r.rc05, r.rc10);
  }
  EXPECT_LT(rows[0].avg, 0.0);
  std::stringstream csv;
  write_panel_csv(rows, csv);
  EXPECT_NE(csv.str().find("MSE"), std::string::npos);
}
