#pragma once

// Negative-sampling and softmax kernels shared by training and the gradient
// tests. Templated on the storage type: training runs on float matrices,
// finite-difference checks run the same code on double matrices.

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "voltext/common/matrix.h"

namespace voltext::embedding {

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow.
inline double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Loss and gradients of
//   l = -log s(o_pos . h) - sum_k log s(-o_neg_k . h)
// with respect to the hidden vector h and each participating output row.
struct NsGradient {
  double loss = 0.0;
  std::vector<double> hidden;
  // (output row, d l / d row), positive first then negatives in draw order;
  // duplicated negatives appear once per draw.
  std::vector<std::pair<std::int32_t, std::vector<double>>> output_rows;
};

template <class T>
NsGradient ns_gradient(std::span<const double> hidden, const Matrix<T>& output,
                       std::int32_t positive, std::span<const std::int32_t> negatives) {
  const std::size_t dim = hidden.size();
  NsGradient g;
  g.hidden.assign(dim, 0.0);
  auto term = [&](std::int32_t row, double label) {
    auto o = output.row(std::size_t(row));
    double score = dot<T, double>(o, hidden);
    // d/dscore of -log s(score) is s - 1; of -log s(-score) is s.
    double coeff = sigmoid(score) - label;
    g.loss -= label > 0 ? log_sigmoid(score) : log_sigmoid(-score);
    std::vector<double> go(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      g.hidden[i] += coeff * double(o[i]);
      go[i] = coeff * hidden[i];
    }
    g.output_rows.emplace_back(row, std::move(go));
  };
  term(positive, 1.0);
  for (auto n : negatives) term(n, 0.0);
  return g;
}

template <class T>
std::vector<double> sum_rows(const Matrix<T>& m, std::span<const std::int32_t> rows) {
  std::vector<double> h(m.cols(), 0.0);
  for (auto r : rows) {
    auto v = m.row(std::size_t(r));
    for (std::size_t i = 0; i < h.size(); ++i) h[i] += double(v[i]);
  }
  return h;
}

// Scratch buffers reused across steps so the training loop does not allocate.
struct NsWorkspace {
  std::vector<double> hidden;
  std::vector<double> grad_hidden;
  std::vector<double> coeff;
};

namespace detail {

// Computes the hidden gradient from the pre-update output rows, then updates
// those rows. Returns the loss when `with_loss` is set, else 0.
template <class T>
double ns_update(Matrix<T>& output, std::int32_t positive,
                 std::span<const std::int32_t> negatives, double alpha, NsWorkspace& ws,
                 bool with_loss) {
  const std::size_t dim = ws.hidden.size();
  const std::size_t terms = negatives.size() + 1;
  ws.coeff.resize(terms);
  ws.grad_hidden.assign(dim, 0.0);
  double loss = 0.0;
  for (std::size_t j = 0; j < terms; ++j) {
    auto row = j == 0 ? positive : negatives[j - 1];
    double label = j == 0 ? 1.0 : 0.0;
    auto o = output.row(std::size_t(row));
    double score = 0.0;
    for (std::size_t i = 0; i < dim; ++i) score += double(o[i]) * ws.hidden[i];
    ws.coeff[j] = sigmoid(score) - label;
    if (with_loss) loss -= j == 0 ? log_sigmoid(score) : log_sigmoid(-score);
    for (std::size_t i = 0; i < dim; ++i) ws.grad_hidden[i] += ws.coeff[j] * double(o[i]);
  }
  if (alpha != 0.0) {
    for (std::size_t j = 0; j < terms; ++j) {
      auto o = output.row(std::size_t(j == 0 ? positive : negatives[j - 1]));
      const double c = alpha * ws.coeff[j];
      for (std::size_t i = 0; i < dim; ++i) o[i] = T(double(o[i]) - c * ws.hidden[i]);
    }
  }
  return loss;
}

template <class T>
void accumulate_rows(const Matrix<T>& m, std::span<const std::int32_t> rows, double scale,
                     std::vector<double>& acc) {
  for (auto r : rows) {
    auto v = m.row(std::size_t(r));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += scale * double(v[i]);
  }
}

}  // namespace detail

// Skip-gram pair step. The target's input representation is the sum of
// `target_rows` (one row for Word2Vec; whole-token plus n-gram rows for
// FastText). Gradients are taken at the pre-update point, so the update is
// exactly -alpha * gradient. Returns the loss before the step when
// `with_loss` is set.
template <class T>
double sgns_pair_step(Matrix<T>& input, Matrix<T>& output,
                      std::span<const std::int32_t> target_rows, std::int32_t context,
                      std::span<const std::int32_t> negatives, double alpha,
                      NsWorkspace& ws, bool with_loss = false) {
  ws.hidden.assign(input.cols(), 0.0);
  detail::accumulate_rows(input, target_rows, 1.0, ws.hidden);
  double loss = detail::ns_update(output, context, negatives, alpha, ws, with_loss);
  if (alpha == 0.0) return loss;
  for (auto r : target_rows) {
    auto v = input.row(std::size_t(r));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = T(double(v[i]) - alpha * ws.grad_hidden[i]);
  }
  return loss;
}

template <class T>
double sgns_pair_step(Matrix<T>& input, Matrix<T>& output,
                      std::span<const std::int32_t> target_rows, std::int32_t context,
                      std::span<const std::int32_t> negatives, double alpha) {
  NsWorkspace ws;
  return sgns_pair_step(input, output, target_rows, context, negatives, alpha, ws, true);
}

template <class T>
double sgns_loss(const Matrix<T>& input, const Matrix<T>& output,
                 std::span<const std::int32_t> target_rows, std::int32_t context,
                 std::span<const std::int32_t> negatives) {
  auto h = sum_rows(input, target_rows);
  return ns_gradient<T>(h, output, context, negatives).loss;
}

// Hidden vector for CBOW: mean over context words of each word's summed rows.
template <class T>
std::vector<double> cbow_hidden(const Matrix<T>& input,
                                std::span<const std::vector<std::int32_t>> context) {
  std::vector<double> h(input.cols(), 0.0);
  for (const auto& rows : context) {
    detail::accumulate_rows(input, std::span<const std::int32_t>(rows), 1.0, h);
  }
  for (auto& x : h) x /= double(context.size());
  return h;
}

// CBOW step: the hidden vector is the mean of the context words; each context
// word receives 1/|context| of the hidden gradient. An empty context is a
// no-op returning 0.
template <class T>
double cbow_step(Matrix<T>& input, Matrix<T>& output,
                 std::span<const std::vector<std::int32_t>> context, std::int32_t target,
                 std::span<const std::int32_t> negatives, double alpha, NsWorkspace& ws,
                 bool with_loss = false) {
  if (context.empty()) return 0.0;
  ws.hidden = cbow_hidden(input, context);
  double loss = detail::ns_update(output, target, negatives, alpha, ws, with_loss);
  if (alpha == 0.0) return loss;
  const double share = alpha / double(context.size());
  for (const auto& rows : context) {
    for (auto r : rows) {
      auto v = input.row(std::size_t(r));
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = T(double(v[i]) - share * ws.grad_hidden[i]);
    }
  }
  return loss;
}

template <class T>
double cbow_step(Matrix<T>& input, Matrix<T>& output,
                 std::span<const std::vector<std::int32_t>> context, std::int32_t target,
                 std::span<const std::int32_t> negatives, double alpha) {
  NsWorkspace ws;
  return cbow_step(input, output, context, target, negatives, alpha, ws, true);
}

template <class T>
double cbow_loss(const Matrix<T>& input, const Matrix<T>& output,
                 std::span<const std::vector<std::int32_t>> context, std::int32_t target,
                 std::span<const std::int32_t> negatives) {
  if (context.empty()) return 0.0;
  auto h = cbow_hidden(input, context);
  return ns_gradient<T>(h, output, target, negatives).loss;
}

// Full softmax p(l | h) over every output row. Only meant for tiny
// vocabularies (testing mode and as an oracle for the sampled objective).
template <class T>
std::vector<double> softmax_probabilities(std::span<const double> hidden, const Matrix<T>& output) {
  std::vector<double> p(output.rows());
  double mx = -INFINITY;
  for (std::size_t l = 0; l < output.rows(); ++l) {
    p[l] = dot<T, double>(output.row(l), hidden);
    mx = std::max(mx, p[l]);
  }
  double z = 0.0;
  for (auto& v : p) {
    v = std::exp(v - mx);
    z += v;
  }
  for (auto& v : p) v /= z;
  return p;
}

// One SGD step on -log p(context | target) under the full softmax.
template <class T>
double softmax_pair_step(Matrix<T>& input, Matrix<T>& output,
                         std::span<const std::int32_t> target_rows, std::int32_t context,
                         double alpha) {
  auto h = sum_rows(input, target_rows);
  auto p = softmax_probabilities<T>(h, output);
  double loss = -std::log(p[std::size_t(context)]);
  std::vector<double> gh(h.size(), 0.0);
  for (std::size_t l = 0; l < output.rows(); ++l) {
    double coeff = p[l] - (std::int32_t(l) == context ? 1.0 : 0.0);
    auto o = output.row(l);
    for (std::size_t i = 0; i < h.size(); ++i) gh[i] += coeff * double(o[i]);
  }
  for (std::size_t l = 0; l < output.rows(); ++l) {
    double coeff = p[l] - (std::int32_t(l) == context ? 1.0 : 0.0);
    auto o = output.row(l);
    for (std::size_t i = 0; i < h.size(); ++i) o[i] = T(double(o[i]) - alpha * coeff * h[i]);
  }
  for (auto r : target_rows) {
    auto v = input.row(std::size_t(r));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = T(double(v[i]) - alpha * gh[i]);
  }
  return loss;
}

}  // namespace voltext::embedding
