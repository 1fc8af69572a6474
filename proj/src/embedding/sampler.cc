#include "voltext/embedding/sampler.h"

#include <algorithm>
#include <cmath>

#include "voltext/common/error.h"

namespace voltext::embedding {

UnigramSampler::UnigramSampler(std::span<const long long> counts, double exponent) {
  if (counts.empty()) fail(ErrorCode::kEmptyVocabulary, "sampler over empty vocabulary");
  cdf_.resize(counts.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    acc += counts[i] > 0 ? std::pow(double(counts[i]), exponent) : 0.0;
    cdf_[i] = acc;
  }
  if (!(acc > 0)) fail(ErrorCode::kEmptyVocabulary, "sampler has no mass");
  for (auto& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

std::int32_t UnigramSampler::draw(Rng& rng) const {
  double u = uniform01(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return std::int32_t(it - cdf_.begin());
}

double UnigramSampler::probability(std::size_t i) const {
  return i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1];
}

void UnigramSampler::draw(Rng& rng, int k, std::int32_t exclude,
                          std::vector<std::int32_t>& out) const {
  out.clear();
  bool only_excluded = exclude >= 0 && std::size_t(exclude) < cdf_.size() &&
                       probability(std::size_t(exclude)) >= 1.0;
  for (int i = 0; i < k; ++i) {
    std::int32_t s = draw(rng);
    while (s == exclude && !only_excluded) s = draw(rng);
    out.push_back(s);
  }
}

}  // namespace voltext::embedding
