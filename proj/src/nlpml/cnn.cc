#include "voltext/nlpml/cnn.h"

#include <algorithm>
#include <cmath>

#include "voltext/common/error.h"

namespace voltext::nlpml {

namespace {

// W . X[i : i + h] + b, counting only rows that exist in x (padding is zero).
double window_pre(const Matrix<double>& x, std::size_t i, std::span<const double> kernel,
                  std::size_t h, double bias) {
  const std::size_t m = x.cols();
  const std::size_t rows = std::min(h, x.rows() - std::min(i, x.rows()));
  const double* xp = x.storage().data() + i * m;
  double s = 0.0;
  for (std::size_t j = 0; j < rows * m; ++j) s += kernel[j] * xp[j];
  return s + bias;
}

}  // namespace

std::vector<double> conv_valid(const Matrix<double>& x, std::span<const double> kernel,
                               std::size_t h, double bias, Exec exec) {
  if (h == 0 || h > x.rows()) {
    fail(ErrorCode::kKernelTooLarge, "kernel height " + std::to_string(h) + " for " +
                                         std::to_string(x.rows()) + " input rows");
  }
  if (kernel.size() != h * x.cols()) fail(ErrorCode::kShapeMismatch, "kernel must be h x M");
  const std::size_t n = x.rows() - h + 1;
  std::vector<double> out(n);
  if (exec == Exec::kSerial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, window_pre(x, i, kernel, h, bias));
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
      out[std::size_t(i)] = std::max(0.0, window_pre(x, std::size_t(i), kernel, h, bias));
    }
  }
  return out;
}

CnnModel::CnnModel(CnnConfig config, std::size_t dim) : config_(std::move(config)), dim_(dim) {
  config_.validate();
  if (dim_ == 0) fail(ErrorCode::kConfigError, "embedding dimension must be positive");
  std::size_t off = 0;
  for (std::size_t w = 0; w < widths(); ++w) {
    width_offset_.push_back(off);
    off += filters() * (width(w) * dim_ + 1);
  }
  dense_offset_ = off;
  params_.assign(parameter_count(config_, dim_), 0.0);
}

std::size_t CnnModel::parameter_count(const CnnConfig& config, std::size_t dim) {
  std::size_t n = 0;
  const std::size_t f = std::size_t(config.filter_sets);
  for (int h : config.filter_widths) n += f * (std::size_t(h) * dim + 1);
  return n + config.filter_widths.size() * f + 1 + dim;
}

std::size_t CnnModel::kernel_offset(std::size_t w, std::size_t f) const {
  return width_offset_[w] + f * width(w) * dim_;
}

std::size_t CnnModel::bias_offset(std::size_t w, std::size_t f) const {
  return width_offset_[w] + filters() * width(w) * dim_ + f;
}

bool CnnModel::is_penalized(std::size_t i) const {
  if (i >= dense_offset_) return i < dense_bias_offset();
  auto it = std::upper_bound(width_offset_.begin(), width_offset_.end(), i);
  std::size_t w = std::size_t(it - width_offset_.begin()) - 1;
  return i < width_offset_[w] + filters() * width(w) * dim_;
}

void CnnModel::initialize(std::uint64_t seed, double output_bias) {
  Rng rng(seed);
  std::fill(params_.begin(), params_.end(), 0.0);
  for (std::size_t w = 0; w < widths(); ++w) {
    const double fan_in = double(width(w) * dim_);
    const double fan_out = double(width(w) * filters());
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (std::size_t f = 0; f < filters(); ++f) {
      const std::size_t o = kernel_offset(w, f);
      for (std::size_t j = 0; j < width(w) * dim_; ++j) params_[o + j] = uniform(rng, -limit, limit);
    }
  }
  const double limit = std::sqrt(6.0 / (double(pooled_size()) + 1.0));
  for (std::size_t j = 0; j < pooled_size(); ++j) params_[dense_offset_ + j] = uniform(rng, -limit, limit);
  params_[dense_bias_offset()] = output_bias;
  for (std::size_t j = 0; j < dim_; ++j) params_[no_news_offset() + j] = uniform(rng, -0.05, 0.05);
}

Matrix<double> materialize(const DayInput& input, const CnnModel& model,
                           const Matrix<double>* table) {
  const std::size_t m = model.dim();
  if (input.no_news) {
    Matrix<double> x(1, m);
    auto nn = model.no_news();
    std::copy(nn.begin(), nn.end(), x.row(0).begin());
    return x;
  }
  if (input.rows.cols() != m || input.rows.rows() != input.ids.size()) {
    fail(ErrorCode::kShapeMismatch, "input rows do not match the model dimension");
  }
  if (input.length() > input.max_len) fail(ErrorCode::kShapeMismatch, "input longer than max_len");
  if (!table) return input.rows;
  Matrix<double> x = input.rows;
  for (std::size_t r = 0; r < input.ids.size(); ++r) {
    if (input.ids[r] >= 0) {
      auto t = table->row(std::size_t(input.ids[r]));
      std::copy(t.begin(), t.end(), x.row(r).begin());
    }
  }
  return x;
}

double forward_rows(Matrix<double> x, bool no_news, std::size_t max_len, const CnnModel& model,
                    std::span<const double> dropout_mask, ForwardCache* cache) {
  if (x.cols() != model.dim()) fail(ErrorCode::kShapeMismatch, "input dimension mismatch");
  if (x.rows() > max_len) fail(ErrorCode::kShapeMismatch, "more rows than max_len");
  const std::size_t len = x.rows();
  const std::size_t k = model.pooled_size();
  if (!dropout_mask.empty() && dropout_mask.size() != k) {
    fail(ErrorCode::kShapeMismatch, "dropout mask size mismatch");
  }
  std::vector<PoolChoice> pools(k);
  std::vector<double> pooled(k);
  for (std::size_t w = 0; w < model.widths(); ++w) {
    const std::size_t h = model.width(w);
    if (h > max_len) fail(ErrorCode::kKernelTooLarge, "filter width exceeds input length");
    const std::size_t windows = max_len - h + 1;
    const std::size_t explicit_windows = std::min(len, windows);
    for (std::size_t f = 0; f < model.filters(); ++f) {
      auto kern = model.kernel(w, f);
      const double b = model.bias(w, f);
      PoolChoice best{0, -INFINITY};
      for (std::size_t i = 0; i < explicit_windows; ++i) {
        double s = window_pre(x, i, kern, h, b);
        if (s > best.pre) best = {i, s};
      }
      if (windows > explicit_windows && b > best.pre) best = {len, b};
      const std::size_t j = w * model.filters() + f;
      pools[j] = best;
      pooled[j] = std::max(0.0, best.pre);
    }
  }
  auto v = model.dense_weights();
  double pre = model.dense_bias();
  for (std::size_t j = 0; j < k; ++j) {
    pre += v[j] * pooled[j] * (dropout_mask.empty() ? 1.0 : dropout_mask[j]);
  }
  const double out = std::max(0.0, pre);
  if (cache) {
    cache->x = std::move(x);
    cache->no_news = no_news;
    cache->pools = std::move(pools);
    cache->pooled = std::move(pooled);
    cache->mask.assign(dropout_mask.begin(), dropout_mask.end());
    cache->pre = pre;
    cache->out = out;
  }
  return out;
}

std::vector<double> draw_dropout_mask(Rng& rng, std::size_t n, double rate) {
  std::vector<double> mask(n, 1.0);
  if (rate <= 0) return mask;
  const double keep = 1.0 / (1.0 - rate);
  for (auto& m : mask) m = uniform01(rng) < rate ? 0.0 : keep;
  return mask;
}

double forward(const DayInput& input, const CnnModel& model, ForwardCache* cache, Rng* train_rng,
               const Matrix<double>* table) {
  std::vector<double> mask;
  if (train_rng) mask = draw_dropout_mask(*train_rng, model.pooled_size(), model.config().dropout_rate);
  return forward_rows(materialize(input, model, table), input.no_news, input.max_len, model, mask,
                      cache);
}

double backward(const ForwardCache& cache, double target, const CnnModel& model,
                std::span<double> grad, Matrix<double>* dx) {
  if (grad.size() != model.params().size()) fail(ErrorCode::kShapeMismatch, "gradient size mismatch");
  const double err = cache.out - target;
  if (cache.pre <= 0) return err * err;
  const double dout = 2.0 * err;
  const std::size_t m = model.dim();
  const std::size_t len = cache.x.rows();
  auto v = model.dense_weights();
  grad[model.dense_bias_offset()] += dout;
  for (std::size_t w = 0; w < model.widths(); ++w) {
    const std::size_t h = model.width(w);
    for (std::size_t f = 0; f < model.filters(); ++f) {
      const std::size_t j = w * model.filters() + f;
      const double mj = cache.mask.empty() ? 1.0 : cache.mask[j];
      grad[model.dense_offset() + j] += dout * cache.pooled[j] * mj;
      const PoolChoice& p = cache.pools[j];
      if (p.pre <= 0) continue;
      const double dp = dout * v[j] * mj;
      if (dp == 0.0) continue;
      grad[model.bias_offset(w, f)] += dp;
      const std::size_t rows = p.window < len ? std::min(h, len - p.window) : 0;
      const std::size_t ko = model.kernel_offset(w, f);
      const double* xp = cache.x.storage().data() + p.window * m;
      for (std::size_t q = 0; q < rows * m; ++q) grad[ko + q] += dp * xp[q];
      if (dx || cache.no_news) {
        auto kern = model.kernel(w, f);
        for (std::size_t r = 0; r < rows; ++r) {
          const std::size_t row = p.window + r;
          for (std::size_t c = 0; c < m; ++c) {
            const double g = dp * kern[r * m + c];
            if (dx) (*dx)(row, c) += g;
            if (cache.no_news) grad[model.no_news_offset() + c] += g;
          }
        }
      }
    }
  }
  return err * err;
}

double regularization(const CnnModel& model) {
  const auto& p = model.params();
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (model.is_penalized(i)) s += p[i] * p[i];
  }
  return model.config().l2_decay * s;
}

void add_regularization_gradient(const CnnModel& model, std::span<double> grad) {
  const auto& p = model.params();
  const double c = 2.0 * model.config().l2_decay;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (model.is_penalized(i)) grad[i] += c * p[i];
  }
}

double loss_and_gradient(const DayInput& input, double target, const CnnModel& model,
                         std::span<const double> dropout_mask, std::vector<double>& grad,
                         Matrix<double>* dx) {
  ForwardCache cache;
  forward_rows(materialize(input, model), input.no_news, input.max_len, model, dropout_mask, &cache);
  grad.assign(model.params().size(), 0.0);
  if (dx) *dx = Matrix<double>(cache.x.rows(), cache.x.cols());
  double loss = backward(cache, target, model, grad, dx);
  add_regularization_gradient(model, grad);
  return loss + regularization(model);
}

double value_and_input_gradient(const Matrix<double>& x, std::size_t max_len,
                                const CnnModel& model, Matrix<double>* dx) {
  ForwardCache cache;
  double out = forward_rows(x, false, max_len, model, {}, &cache);
  if (dx) {
    *dx = Matrix<double>(x.rows(), x.cols());
    std::vector<double> scratch(model.params().size(), 0.0);
    // backward() returns d (out - t)^2; with t = out - 1/2 the factor
    // 2 (out - t) is 1, leaving d out / d x.
    backward(cache, out - 0.5, model, scratch, dx);
  }
  return out;
}

}  // namespace voltext::nlpml
