#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "voltext/common/forecast_series.h"
#include "voltext/common/parallel.h"
#include "voltext/common/rng.h"
#include "voltext/eval/losses.h"

namespace voltext::eval {

// Geometric block length on {1, 2, ...} with mean avg_block.
std::uint64_t draw_block_length(Rng& rng, double avg_block);

// Politis-Romano stationary bootstrap: blocks with geometric lengths and
// uniform starts, wrapping at the end, concatenated and cut to length n.
std::vector<std::size_t> stationary_bootstrap_indices(std::size_t n, double avg_block, Rng& rng);

// How the bootstrap differentials are centered.
//  kConsistent: benchmarks whose mean differential exceeds the smallest one
//    by more than sqrt(2 log log n) bootstrap standard errors keep that
//    excess, so clearly dominated benchmarks do not drive the null law.
//  kAll: every differential is centered at its sample mean.
enum class Recentering { kConsistent, kAll };

struct RealityCheckOptions {
  Loss loss = Loss::kMSE;
  std::size_t n_boot = 999;
  double avg_block = 5.0;
  std::uint64_t seed = 1;
  Recentering recentering = Recentering::kConsistent;
  MdaReference mda_reference = MdaReference::kPreviousActual;
};

struct RealityCheckResult {
  double statistic = 0.0;  // min_k mean(L^k - L^0)
  double p_value = 1.0;    // share of bootstrap statistics >= statistic
  std::size_t n_bootstrap = 0;
  double avg_block = 0.0;
  std::vector<double> mean_differentials;
};

// Tests whether `candidate` has lower expected loss than every benchmark
// (small p rejects "some benchmark is at least as good"). `days` restricts the
// test to a subset (resampled within the subset). Replicates use independent
// streams derived from the seed, so both Exec modes give the same result.
// Throws MisalignedSeries when dates or actuals differ.
RealityCheckResult reality_check(const ForecastSeries& candidate,
                                 std::span<const ForecastSeries> benchmarks,
                                 const RealityCheckOptions& options,
                                 std::span<const std::size_t> days = {},
                                 Exec exec = Exec::kParallel);

// Same test on a precomputed n x K matrix of differentials L^k - L^0.
RealityCheckResult reality_check_differentials(const std::vector<std::vector<double>>& d,
                                               const RealityCheckOptions& options,
                                               Exec exec = Exec::kParallel);

void check_aligned(const ForecastSeries& a, const ForecastSeries& b);

}  // namespace voltext::eval
