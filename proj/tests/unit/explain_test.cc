#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.h"
#include "voltext/common/error.h"
#include "voltext/common/rng.h"
#include "voltext/explain/attribution.h"
#include "voltext/explain/quadrature.h"
#include "voltext/explain/report.h"
#include "voltext/nlpml/trainer.h"

using namespace voltext;
using namespace voltext::explain;

namespace {

Matrix<double> rand_rows(Rng& rng, std::size_t r, std::size_t c) {
  Matrix<double> m(r, c);
  for (auto& v : m.flat()) v = uniform(rng, -1, 1);
  return m;
}

nlpml::CnnModel model(std::uint64_t seed, std::size_t dim, int max_len) {
  nlpml::CnnConfig cfg;
  cfg.max_len = max_len;
  cfg.filter_widths = {2, 3};
  nlpml::CnnModel m(cfg, dim);
  m.initialize(seed, 1.0);
  Rng rng(seed);
  for (std::size_t w = 0; w < m.widths(); ++w)
    for (std::size_t f = 0; f < m.filters(); ++f) m.params()[m.bias_offset(w, f)] = uniform(rng, -0.2, 0.2);
  return m;
}

// F(X) = (sum X)^2, smooth with a known gradient.
ModelFn square_of_sum() {
  ModelFn f;
  f.value = [](const Matrix<double>& x) {
    double s = 0.0;
    for (double v : x.flat()) s += v;
    return s * s;
  };
  f.value_and_grad = [](const Matrix<double>& x, Matrix<double>& g) {
    double s = 0.0;
    for (double v : x.flat()) s += v;
    g = Matrix<double>(x.rows(), x.cols(), 2.0 * s);
    return s * s;
  };
  return f;
}

}  // namespace

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  for (int m : {1, 5, 20, 50}) {
    const auto q = gauss_legendre(m);
    ASSERT_EQ(q.nodes.size(), std::size_t(m));
    double wsum = 0.0;
    for (double w : q.weights) wsum += w;
    EXPECT_NEAR(wsum, 1.0, 1e-14);
    for (int deg = 0; deg <= 2 * m - 1 && deg <= 40; ++deg) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += q.weights[j] * std::pow(q.nodes[j], deg);
      EXPECT_NEAR(s, 1.0 / (deg + 1), 1e-13) << "m=" << m << " deg=" << deg;
    }
  }
}

TEST(Quadrature, RiemannNodes) {
  const auto q = quadrature_rule(QuadratureMethod::kRiemann, 4);
  EXPECT_EQ(q.nodes, (std::vector<double>{0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(parse_quadrature("riemann"), QuadratureMethod::kRiemann);
}

TEST(IntegratedGradients, SmoothModelIsComplete) {
  Rng rng(1);
  const auto x = rand_rows(rng, 4, 3);
  const auto a = integrated_gradients(square_of_sum(), x, 10, {}, Exec::kSerial);
  EXPECT_NEAR(a.sum(), a.input_value - a.baseline_value, 1e-12);
  EXPECT_EQ(a.values.size(), 10u);
  EXPECT_EQ(a.tokens, 4u);
  for (std::size_t i = 4; i < 10; ++i) EXPECT_EQ(a.values[i], 0.0);
  // Symmetric model: each token gets its share of the row sums.
  double total = 0.0;
  for (double v : x.flat()) total += v;
  for (std::size_t r = 0; r < 4; ++r) {
    double rs = 0.0;
    for (std::size_t c = 0; c < 3; ++c) rs += x(r, c);
    EXPECT_NEAR(a.values[r], rs * total, 1e-12);
  }
}

TEST(IntegratedGradients, SerialEqualsParallel) {
  const auto m = model(2, 4, 20);
  Rng rng(2);
  const auto x = rand_rows(rng, 9, 4);
  const auto f = cnn_model_fn(m, 20);
  QuadratureSpec q;
  q.batch = 7;
  const auto a = integrated_gradients(f, x, 20, q, Exec::kSerial);
  const auto b = integrated_gradients(f, x, 20, q, Exec::kParallel);
  EXPECT_EQ(a.values, b.values);
}

TEST(IntegratedGradients, NonFiniteGradient) {
  ModelFn f;
  f.value = [](const Matrix<double>&) { return 0.0; };
  f.value_and_grad = [](const Matrix<double>& x, Matrix<double>& g) {
    g = Matrix<double>(x.rows(), x.cols(), NAN);
    return 0.0;
  };
  Rng rng(3);
  try {
    integrated_gradients(f, rand_rows(rng, 2, 2), 4, {}, Exec::kSerial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteGradient);
  }
}

TEST(Shapley, ExactMatchesPermutationOracle) {
  // Set function with interactions.
  const std::vector<double> w{1.0, -2.0, 0.5, 3.0, 0.0};
  auto v = [&](std::uint64_t s) {
    double lin = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (s >> i & 1) lin += w[i];
    const bool pair = (s & 3) == 3;
    return lin + (pair ? 4.0 : 0.0) + std::max(0.0, lin);
  };
  const auto exact = shapley_exact(v, 5, Exec::kSerial);
  const auto ref = oracle::shapley_by_permutations(v, 5);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(exact[i], ref[i], 1e-12);
  EXPECT_EQ(shapley_exact(v, 5, Exec::kParallel), exact);
}

TEST(Shapley, CnnExactMatchesOracleAndIsEfficient) {
  const auto m = model(4, 3, 12);
  Rng rng(4);
  const auto x = rand_rows(rng, 6, 3);
  const auto f = cnn_model_fn(m, 12);
  const auto a = shapley_exact(f, x, 12, Exec::kSerial);
  const auto ref = oracle::shapley_by_permutations([&](std::uint64_t s) { return coalition_value(f, x, s); }, 6);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(a.values[i], ref[i], 1e-12);
  EXPECT_NEAR(a.sum(), a.input_value - a.baseline_value, 1e-12);
  EXPECT_NEAR(a.baseline_value, oracle::cnn_forward(m, Matrix<double>(0, 3), 12), 1e-12);
}

TEST(Shapley, DummyTokenGetsNothing) {
  // Value depends on row 0 only.
  ModelFn f;
  f.value = [](const Matrix<double>& x) { return x(0, 0) * 3.0 + 1.0; };
  f.value_and_grad = [](const Matrix<double>& x, Matrix<double>& g) {
    g = Matrix<double>(x.rows(), x.cols());
    g(0, 0) = 3.0;
    return x(0, 0) * 3.0 + 1.0;
  };
  Rng rng(5);
  const auto x = rand_rows(rng, 4, 2);
  const auto a = shapley_exact(f, x, 8, Exec::kSerial);
  EXPECT_NEAR(a.values[0], 3.0 * x(0, 0), 1e-14);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(a.values[i], 0.0);
  const auto s = shapley_sampled(f, x, 8, 50, 1, Exec::kSerial);
  EXPECT_NEAR(s.values[0], 3.0 * x(0, 0), 1e-14);
  EXPECT_NEAR(s.std_error[0], 0.0, 1e-12);
}

TEST(Shapley, LimitsAndDeterminism) {
  Rng rng(6);
  const auto x = rand_rows(rng, 13, 2);
  try {
    shapley_exact(square_of_sum(), x, 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyTokens);
  }
  const auto a = shapley_sampled(square_of_sum(), x, 20, 30, 9, Exec::kSerial);
  const auto b = shapley_sampled(square_of_sum(), x, 20, 30, 9, Exec::kParallel);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NEAR(a.sum(), a.input_value - a.baseline_value, 1e-10);
}

TEST(Report, CsvAndHtml) {
  AttributionVector a;
  a.values = {0.5, -0.25, 0.0, 0.0};
  a.tokens = 3;
  const std::vector<std::string> toks{"shares", "plunge", "today"};
  std::stringstream csv, html;
  write_token_csv(a, toks, {"2016-01-04", "AAPL"}, csv);
  EXPECT_EQ(csv.str(),
            "date,ticker,token,slot,value,method\n"
            "2016-01-04,AAPL,shares,0,0.5,IG\n"
            "2016-01-04,AAPL,plunge,1,-0.25,IG\n"
            "2016-01-04,AAPL,today,2,0,IG\n");
  write_token_html(a, toks, {"2016-01-04", "AAPL"}, html);
  EXPECT_NE(html.str().find("plunge"), std::string::npos);
  EXPECT_NE(html.str().find("<html"), std::string::npos);
}

TEST(Track, ReportsEachOccurrence) {
  const auto m = model(7, 2, 10);
  nlpml::TrainedModel tm{m, std::nullopt};
  Matrix<float> vecs(2, 2);
  vecs(0, 0) = 1.0f;
  vecs(1, 1) = -1.0f;
  const embedding::WordVectors wv({"alert", "calm"}, vecs);
  const auto d1 = nlpml::build_day_input({"calm", "alert", "calm", "alert"}, wv, 10);
  const auto d2 = nlpml::build_day_input({"calm"}, wv, 10);
  const std::vector<TrackedDay> days{{parse_date("2016-01-04"), &tm, &d1, 1.0}, {parse_date("2016-01-05"), &tm, &d2, 2.0}};
  const auto t = track_token(days, "alert", {}, Exec::kSerial);
  ASSERT_EQ(t.occurrences.size(), 2u);
  EXPECT_EQ(t.occurrences[0].slot, 1u);
  EXPECT_EQ(t.occurrences[1].slot, 3u);
  EXPECT_EQ(t.increases + t.decreases + t.zeros, 2u);
  EXPECT_EQ(slot_tokens(nlpml::build_day_input({}, wv, 10)), std::vector<std::string>{nlpml::kPadToken});
}
