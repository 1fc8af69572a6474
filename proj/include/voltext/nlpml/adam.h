#pragma once

#include <span>
#include <vector>

#include "voltext/nlpml/config.h"

namespace voltext::nlpml {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long long t = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update of `params` in place. Throws
// NonFiniteGradient if any gradient entry is NaN or infinite.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamHyper& hyper);

}  // namespace voltext::nlpml
