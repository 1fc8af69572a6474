#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "voltext/common/matrix.h"
#include "voltext/common/parallel.h"
#include "voltext/common/rng.h"
#include "voltext/nlpml/config.h"
#include "voltext/nlpml/input.h"

namespace voltext::nlpml {

// relu(W . X[i:i+h] + b) for every valid window of `x`; `kernel` is h x M
// row-major. Throws KernelTooLarge when h > x.rows().
std::vector<double> conv_valid(const Matrix<double>& x, std::span<const double> kernel,
                               std::size_t h, double bias, Exec exec = Exec::kSerial);

// Parameters in one flat vector: for each width, F kernels (h x M) then F
// biases; then the dense weights (|widths| F), the dense bias and the no-news
// vector (M).
class CnnModel {
 public:
  CnnModel() = default;
  CnnModel(CnnConfig config, std::size_t dim);

  static std::size_t parameter_count(const CnnConfig& config, std::size_t dim);

  const CnnConfig& config() const { return config_; }
  std::size_t dim() const { return dim_; }
  std::size_t widths() const { return config_.filter_widths.size(); }
  std::size_t filters() const { return std::size_t(config_.filter_sets); }
  std::size_t pooled_size() const { return widths() * filters(); }
  std::size_t width(std::size_t w) const { return std::size_t(config_.filter_widths[w]); }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  std::size_t kernel_offset(std::size_t w, std::size_t f) const;
  std::size_t bias_offset(std::size_t w, std::size_t f) const;
  std::size_t dense_offset() const { return dense_offset_; }
  std::size_t dense_bias_offset() const { return dense_offset_ + pooled_size(); }
  std::size_t no_news_offset() const { return dense_bias_offset() + 1; }

  std::span<const double> kernel(std::size_t w, std::size_t f) const {
    return {params_.data() + kernel_offset(w, f), width(w) * dim_};
  }
  double bias(std::size_t w, std::size_t f) const { return params_[bias_offset(w, f)]; }
  std::span<const double> dense_weights() const {
    return {params_.data() + dense_offset_, pooled_size()};
  }
  double dense_bias() const { return params_[dense_bias_offset()]; }
  std::span<const double> no_news() const { return {params_.data() + no_news_offset(), dim_}; }

  // True for kernel and dense weights, the coordinates under the L2 penalty.
  bool is_penalized(std::size_t i) const;

  // Glorot-uniform kernels and dense weights, zero biases, dense bias set to
  // `output_bias`, no-news vector uniform in [-0.05, 0.05].
  void initialize(std::uint64_t seed, double output_bias = 0.0);

 private:
  CnnConfig config_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> width_offset_;
  std::size_t dense_offset_ = 0;
  std::vector<double> params_;
};

struct PoolChoice {
  // Window start of the maximum; equals the input length when the maximum
  // is an all-padding window.
  std::size_t window = 0;
  double pre = 0.0;  // W . X + b at that window
};

struct ForwardCache {
  Matrix<double> x;  // real rows (or the no-news row)
  bool no_news = false;
  std::vector<PoolChoice> pools;  // width-major, |widths| F
  std::vector<double> pooled;
  std::vector<double> mask;  // dropout multipliers; empty in evaluation mode
  double pre = 0.0;
  double out = 0.0;
};

// Input rows as the network sees them: stored rows, table rows for
// vocabulary tokens when `table` is given, or the no-news vector.
Matrix<double> materialize(const DayInput& input, const CnnModel& model,
                           const Matrix<double>* table = nullptr);

// Forecast for already materialized rows. Equivalent to running the network
// on those rows followed by max_len - rows zero padding rows; all-padding
// windows are represented once since they share one value.
double forward_rows(Matrix<double> x, bool no_news, std::size_t max_len, const CnnModel& model,
                    std::span<const double> dropout_mask, ForwardCache* cache);

// Evaluation mode unless `train_rng` is given, in which case a dropout mask is
// drawn from it.
double forward(const DayInput& input, const CnnModel& model, ForwardCache* cache = nullptr,
               Rng* train_rng = nullptr, const Matrix<double>* table = nullptr);

std::vector<double> draw_dropout_mask(Rng& rng, std::size_t n, double rate);

// Gradient of (out - target)^2 only. Adds into `grad` (parameter layout) and,
// when given, into `dx` (rows of cache.x). The no-news row's gradient goes to
// the no-news parameters. Returns the squared error.
double backward(const ForwardCache& cache, double target, const CnnModel& model,
                std::span<double> grad, Matrix<double>* dx = nullptr);

// l2 (sum of squared kernel and dense weights).
double regularization(const CnnModel& model);
void add_regularization_gradient(const CnnModel& model, std::span<double> grad);

// Full objective and its gradient for one sample with a fixed dropout mask.
double loss_and_gradient(const DayInput& input, double target, const CnnModel& model,
                         std::span<const double> dropout_mask, std::vector<double>& grad,
                         Matrix<double>* dx = nullptr);

// Value and input gradient of the evaluation-mode forecast as a function of
// the real-token rows, used for attribution.
double value_and_input_gradient(const Matrix<double>& x, std::size_t max_len,
                                const CnnModel& model, Matrix<double>* dx);

}  // namespace voltext::nlpml
