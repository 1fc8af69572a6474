#include "voltext/common/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "voltext/common/error.h"

namespace voltext::stats {

double mean(std::span<const double> x) {
  if (x.empty()) fail(ErrorCode::kInvalidArgument, "mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / double(x.size() - 1);
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

double quantile(std::span<const double> x, double p) {
  if (x.empty()) fail(ErrorCode::kInvalidArgument, "quantile of empty sample");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  double h = (double(s.size()) - 1.0) * p;
  auto lo = std::size_t(std::floor(h));
  auto hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - double(lo)) * (s[hi] - s[lo]);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    double r = 0.5 * double(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "pearson needs two equal samples of size >= 2");
  }
  double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  return pearson(rx, ry);
}

}  // namespace voltext::stats
