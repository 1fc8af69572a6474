#include "voltext/explain/attribution.h"

#include <bit>
#include <cmath>
#include <numeric>

#include "voltext/common/error.h"
#include "voltext/common/rng.h"

namespace voltext::explain {

ModelFn cnn_model_fn(const nlpml::CnnModel& model, std::size_t max_len) {
  ModelFn f;
  f.value = [&model, max_len](const Matrix<double>& x) {
    return nlpml::value_and_input_gradient(x, max_len, model, nullptr);
  };
  f.value_and_grad = [&model, max_len](const Matrix<double>& x, Matrix<double>& grad) {
    return nlpml::value_and_input_gradient(x, max_len, model, &grad);
  };
  return f;
}

std::string to_string(AttributionMethod m) {
  switch (m) {
    case AttributionMethod::kIG: return "IG";
    case AttributionMethod::kShapleyExact: return "ShapleyExact";
    case AttributionMethod::kShapleySampled: return "ShapleySampled";
  }
  return "?";
}

double AttributionVector::sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

namespace {

void check_shape(const Matrix<double>& x, std::size_t max_len) {
  if (x.rows() > max_len) fail(ErrorCode::kShapeMismatch, "more token rows than slots");
}

Matrix<double> scaled(const Matrix<double>& x, double a) {
  Matrix<double> y = x;
  for (auto& v : y.storage()) v *= a;
  return y;
}

}  // namespace

AttributionVector integrated_gradients(const ModelFn& f, const Matrix<double>& x,
                                       std::size_t max_len, const QuadratureSpec& quad,
                                       Exec exec, Matrix<double>* coordinate_attributions) {
  check_shape(x, max_len);
  if (quad.batch < 1) fail(ErrorCode::kInvalidArgument, "batch must be positive");
  const auto rule = quadrature_rule(quad.method, quad.steps);
  const std::size_t m = rule.nodes.size();
  const std::size_t batch = std::size_t(quad.batch);

  Matrix<double> avg(x.rows(), x.cols());
  std::vector<Matrix<double>> grads(std::min(batch, m));
  for (std::size_t b0 = 0; b0 < m; b0 += batch) {
    const std::size_t bn = std::min(batch, m - b0);
    auto eval = [&](std::size_t j) {
      grads[j] = Matrix<double>(x.rows(), x.cols());
      f.value_and_grad(scaled(x, rule.nodes[b0 + j]), grads[j]);
    };
    if (exec == Exec::kSerial) {
      for (std::size_t j = 0; j < bn; ++j) eval(j);
    } else {
#pragma omp parallel for schedule(dynamic, 1)
      for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(bn); ++j) eval(std::size_t(j));
    }
    for (std::size_t j = 0; j < bn; ++j) {
      const double w = rule.weights[b0 + j];
      auto& g = grads[j].storage();
      auto& a = avg.storage();
      for (std::size_t q = 0; q < a.size(); ++q) {
        if (!std::isfinite(g[q])) fail(ErrorCode::kNonFiniteGradient, "non-finite gradient on the path");
        a[q] += w * g[q];
      }
    }
  }

  AttributionVector out;
  out.method = AttributionMethod::kIG;
  out.values.assign(max_len, 0.0);
  out.tokens = x.rows();
  out.input_value = f.value(x);
  out.baseline_value = f.value(Matrix<double>(x.rows(), x.cols()));
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double v = x(r, c) * avg(r, c);
      avg(r, c) = v;
      s += v;
    }
    out.values[r] = s;
  }
  if (coordinate_attributions) *coordinate_attributions = std::move(avg);
  return out;
}

double coalition_value(const ModelFn& f, const Matrix<double>& x, std::uint64_t mask) {
  Matrix<double> y = x;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    if (!((mask >> r) & 1u)) std::fill(y.row(r).begin(), y.row(r).end(), 0.0);
  }
  return f.value(y);
}

std::vector<double> shapley_exact(const std::function<double(std::uint64_t)>& value, std::size_t n,
                                  Exec exec) {
  if (n > kMaxExactShapleyTokens) {
    fail(ErrorCode::kTooManyTokens, std::to_string(n) + " tokens; exact enumeration is capped at " +
                                        std::to_string(kMaxExactShapleyTokens));
  }
  const std::size_t count = std::size_t(1) << n;
  std::vector<double> v(count);
  if (exec == Exec::kSerial) {
    for (std::size_t s = 0; s < count; ++s) v[s] = value(s);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t s = 0; s < std::ptrdiff_t(count); ++s) v[std::size_t(s)] = value(std::uint64_t(s));
  }
  // weight[k] = k! (n - k - 1)! / n!
  std::vector<double> weight(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double w = 1.0 / double(n);
    for (std::size_t j = 1; j <= k; ++j) w *= double(j) / double(n - j);
    weight[k] = w;
  }
  std::vector<double> phi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t(1) << i;
    for (std::size_t s = 0; s < count; ++s) {
      if (s & bit) continue;
      phi[i] += weight[std::size_t(std::popcount(s))] * (v[s | bit] - v[s]);
    }
  }
  return phi;
}

AttributionVector shapley_exact(const ModelFn& f, const Matrix<double>& x, std::size_t max_len,
                                Exec exec) {
  check_shape(x, max_len);
  const std::size_t n = x.rows();
  auto phi = shapley_exact([&](std::uint64_t s) { return coalition_value(f, x, s); }, n, exec);
  AttributionVector out;
  out.method = AttributionMethod::kShapleyExact;
  out.values.assign(max_len, 0.0);
  std::copy(phi.begin(), phi.end(), out.values.begin());
  out.tokens = n;
  out.baseline_value = coalition_value(f, x, 0);
  out.input_value = f.value(x);
  return out;
}

AttributionVector shapley_sampled(const ModelFn& f, const Matrix<double>& x, std::size_t max_len,
                                  std::size_t n_permutations, std::uint64_t seed, Exec exec) {
  check_shape(x, max_len);
  if (n_permutations < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 permutations");
  const std::size_t n = x.rows();
  // contrib[p * n + i]: marginal contribution of token i in permutation p.
  std::vector<double> contrib(n_permutations * n, 0.0);
  auto one = [&](std::size_t p) {
    Rng rng = stream_rng(seed, p);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    Matrix<double> y(x.rows(), x.cols());
    double prev = f.value(y);
    for (auto i : order) {
      std::copy(x.row(i).begin(), x.row(i).end(), y.row(i).begin());
      double cur = f.value(y);
      contrib[p * n + i] = cur - prev;
      prev = cur;
    }
  };
  if (exec == Exec::kSerial) {
    for (std::size_t p = 0; p < n_permutations; ++p) one(p);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t p = 0; p < std::ptrdiff_t(n_permutations); ++p) one(std::size_t(p));
  }
  AttributionVector out;
  out.method = AttributionMethod::kShapleySampled;
  out.values.assign(max_len, 0.0);
  out.std_error.assign(max_len, 0.0);
  out.tokens = n;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t p = 0; p < n_permutations; ++p) s += contrib[p * n + i];
    const double mean = s / double(n_permutations);
    double ss = 0.0;
    for (std::size_t p = 0; p < n_permutations; ++p) {
      const double e = contrib[p * n + i] - mean;
      ss += e * e;
    }
    out.values[i] = mean;
    out.std_error[i] = std::sqrt(ss / double(n_permutations - 1) / double(n_permutations));
  }
  out.baseline_value = coalition_value(f, x, 0);
  out.input_value = f.value(x);
  return out;
}

}  // namespace voltext::explain
