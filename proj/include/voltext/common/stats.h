#pragma once

#include <span>
#include <vector>

namespace voltext::stats {

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased, n-1
double median(std::span<const double> x);

// Type-7 sample quantile (linear interpolation between order statistics).
double quantile(std::span<const double> x, double p);

// Ranks starting at 1, ties receive the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> x);

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace voltext::stats
