#include "voltext/nlpml/adam.h"

#include <cmath>

#include "voltext/common/error.h"

namespace voltext::nlpml {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamHyper& hyper) {
  if (params.size() != grads.size() || state.m.size() != params.size()) {
    fail(ErrorCode::kShapeMismatch, "Adam state, parameter and gradient sizes differ");
  }
  for (double g : grads) {
    if (!std::isfinite(g)) fail(ErrorCode::kNonFiniteGradient, "non-finite gradient");
  }
  ++state.t;
  const double c1 = 1.0 - std::pow(hyper.beta1, double(state.t));
  const double c2 = 1.0 - std::pow(hyper.beta2, double(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * grads[i];
    state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * grads[i] * grads[i];
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= hyper.lr * mhat / (std::sqrt(vhat) + hyper.eps);
  }
}

}  // namespace voltext::nlpml
