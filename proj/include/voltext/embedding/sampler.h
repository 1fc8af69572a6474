#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "voltext/common/rng.h"

namespace voltext::embedding {

// Draws token indices with probability proportional to count^exponent.
// Sampling is exact (inverse CDF by binary search), not table-quantized.
class UnigramSampler {
 public:
  UnigramSampler() = default;
  UnigramSampler(std::span<const long long> counts, double exponent);

  std::int32_t draw(Rng& rng) const;
  // K draws; any draw equal to `exclude` is redrawn. If every token with
  // positive mass equals `exclude`, the exclusion cannot be honoured and
  // `exclude` is returned.
  void draw(Rng& rng, int k, std::int32_t exclude, std::vector<std::int32_t>& out) const;

  double probability(std::size_t i) const;
  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace voltext::embedding
