#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "voltext/common/matrix.h"
#include "voltext/common/parallel.h"
#include "voltext/explain/quadrature.h"
#include "voltext/nlpml/trainer.h"

namespace voltext::explain {

// A scalar model of the real-token rows (L x M). Padding rows are implied.
struct ModelFn {
  std::function<double(const Matrix<double>&)> value;
  // Returns the value and writes dF/dX into `grad` (same shape as x).
  std::function<double(const Matrix<double>&, Matrix<double>& grad)> value_and_grad;
};

// Evaluation-mode CNN forecast as a function of the token rows.
ModelFn cnn_model_fn(const nlpml::CnnModel& model, std::size_t max_len);

enum class AttributionMethod { kIG, kShapleyExact, kShapleySampled };
std::string to_string(AttributionMethod m);

struct AttributionVector {
  AttributionMethod method = AttributionMethod::kIG;
  std::vector<double> values;     // one per slot (max_len); padding slots 0
  std::vector<double> std_error;  // sampled Shapley only
  double baseline_value = 0.0;    // F at the baseline / empty coalition
  double input_value = 0.0;       // F at the input / full coalition
  std::size_t tokens = 0;         // real-token slots

  double sum() const;
};

// Integrated gradients from the all-zero baseline. Per-coordinate
// attributions X_i * sum_j w_j dF/dX_i(a_j X); a token's attribution is the
// sum over its M coordinates. Path points are processed in batches of
// quad.batch; within a batch they run in parallel and are accumulated in
// node order. Throws NonFiniteGradient.
AttributionVector integrated_gradients(const ModelFn& f, const Matrix<double>& x,
                                       std::size_t max_len, const QuadratureSpec& quad,
                                       Exec exec = Exec::kParallel,
                                       Matrix<double>* coordinate_attributions = nullptr);

inline constexpr std::size_t kMaxExactShapleyTokens = 12;

// Coalition value: tokens outside `mask` replaced by the zero padding row.
double coalition_value(const ModelFn& f, const Matrix<double>& x, std::uint64_t mask);

// Exact Shapley values by enumerating all 2^n coalitions of the n token rows.
// Throws TooManyTokens for n > 12.
AttributionVector shapley_exact(const ModelFn& f, const Matrix<double>& x, std::size_t max_len,
                                Exec exec = Exec::kParallel);

// Exact Shapley values of an arbitrary set function over n players.
std::vector<double> shapley_exact(const std::function<double(std::uint64_t)>& value, std::size_t n,
                                  Exec exec = Exec::kParallel);

// Monte Carlo over uniformly random permutations; std_error is the standard
// deviation of the marginal contributions over sqrt(n_permutations).
// Permutation p uses its own stream of `seed`, so Exec does not change results.
AttributionVector shapley_sampled(const ModelFn& f, const Matrix<double>& x, std::size_t max_len,
                                  std::size_t n_permutations, std::uint64_t seed,
                                  Exec exec = Exec::kParallel);

}  // namespace voltext::explain
