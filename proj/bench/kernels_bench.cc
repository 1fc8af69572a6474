// Serial reference against the OpenMP version of each kernel. The second
// benchmark argument selects the mode: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include <chrono>
#include <cmath>
#include <random>

#include "voltext/common/rng.h"
#include "voltext/embedding/evaluate.h"
#include "voltext/eval/bootstrap.h"
#include "voltext/explain/attribution.h"
#include "voltext/nlpml/cnn.h"
#include "voltext/nlpml/trainer.h"
#include "voltext/volatility/rolling.h"

using namespace voltext;

namespace {

Exec mode(const benchmark::State& st) { return st.range(1) ? Exec::kParallel : Exec::kSerial; }

Matrix<double> random_rows(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix<double> m(rows, cols);
  for (auto& v : m.flat()) v = uniform(rng, -1.0, 1.0);
  return m;
}

nlpml::DayInput toy_input(Matrix<double> rows, std::size_t max_len) {
  nlpml::DayInput in;
  in.max_len = max_len;
  in.tokens.assign(rows.rows(), "t");
  in.ids.assign(rows.rows(), nlpml::kFixedRow);
  in.rows = std::move(rows);
  return in;
}

Date day0() { return parse_date("2015-01-01"); }

void BM_ConvValid(benchmark::State& st) {
  Rng rng(1);
  const auto x = random_rows(rng, 500, 300);
  const auto h = std::size_t(st.range(0));
  const auto k = random_rows(rng, h, 300);
  for (auto _ : st) benchmark::DoNotOptimize(nlpml::conv_valid(x, k.flat(), h, 0.1, mode(st)));
}
BENCHMARK(BM_ConvValid)->ArgsProduct({{3, 5}, {0, 1}});

void BM_CosineScan(benchmark::State& st) {
  Rng rng(2);
  const std::size_t n = std::size_t(st.range(0)), dim = 300;
  Matrix<float> vecs(n, dim);
  for (auto& v : vecs.flat()) v = float(uniform(rng, -1.0, 1.0));
  std::vector<std::string> tokens(n);
  for (std::size_t i = 0; i < n; ++i) tokens[i] = "w" + std::to_string(i);
  const embedding::WordVectors wv(tokens, vecs);
  std::vector<double> q(dim);
  for (auto& v : q) v = uniform(rng, -1.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(embedding::cosine_scan(wv, q, mode(st)));
}
BENCHMARK(BM_CosineScan)->ArgsProduct({{50000}, {0, 1}});

void BM_RealityCheck(benchmark::State& st) {
  Rng rng(3);
  std::normal_distribution<double> z(0.0, 1.0);
  const std::size_t n = 300, k = std::size_t(st.range(0));
  std::vector<std::vector<double>> d(n, std::vector<double>(k));
  for (auto& row : d)
    for (auto& v : row) v = 0.1 + z(rng);
  eval::RealityCheckOptions opt;
  opt.n_boot = 999;
  for (auto _ : st) benchmark::DoNotOptimize(eval::reality_check_differentials(d, opt, mode(st)));
}
BENCHMARK(BM_RealityCheck)->ArgsProduct({{8}, {0, 1}})->Unit(benchmark::kMillisecond);

nlpml::CnnModel toy_cnn(std::size_t dim, std::size_t max_len) {
  nlpml::CnnConfig cfg;
  cfg.max_len = int(max_len);
  cfg.filter_sets = 8;
  nlpml::CnnModel m(cfg, dim);
  m.initialize(7, 1.0);
  return m;
}

void BM_IntegratedGradients(benchmark::State& st) {
  Rng rng(4);
  const std::size_t dim = 50, max_len = 100;
  const auto m = toy_cnn(dim, max_len);
  const auto f = explain::cnn_model_fn(m, max_len);
  const auto x = random_rows(rng, 40, dim);
  explain::QuadratureSpec q;
  q.steps = int(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(explain::integrated_gradients(f, x, max_len, q, mode(st)));
}
BENCHMARK(BM_IntegratedGradients)->ArgsProduct({{50}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ShapleyExact(benchmark::State& st) {
  Rng rng(5);
  const std::size_t dim = 50, max_len = 20;
  const auto m = toy_cnn(dim, max_len);
  const auto f = explain::cnn_model_fn(m, max_len);
  const auto x = random_rows(rng, std::size_t(st.range(0)), dim);
  for (auto _ : st) benchmark::DoNotOptimize(explain::shapley_exact(f, x, max_len, mode(st)));
}
BENCHMARK(BM_ShapleyExact)->ArgsProduct({{10}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_RollingOls(benchmark::State& st) {
  Rng rng(6);
  std::normal_distribution<double> z(0.0, 1.0);
  const std::size_t n = 1200;
  std::vector<volatility::DailyVolRecord> recs(n);
  double h = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    h = 0.7 * h + 0.4 * z(rng);
    auto& r = recs[t];
    r.date = day0() + std::chrono::days(t);
    r.rv_pos = std::exp(h) * uniform(rng, 0.3, 0.7);
    r.rv_neg = std::exp(h) - r.rv_pos;
    r.rv = r.rv_pos + r.rv_neg;
    r.bpv = r.rv * uniform(rng, 0.6, 1.0);
    r.jump = std::max(r.rv - r.bpv, 0.0);
    r.rq = r.rv * r.rv * uniform(rng, 1.0, 3.0);
  }
  volatility::HarSpec spec;
  spec.family = volatility::HarFamily::kHARQF;
  volatility::RollingProtocol p;
  p.train_len = 1000;
  p.oos_len = 150;
  for (auto _ : st) benchmark::DoNotOptimize(volatility::rolling_forecast(recs, spec, p, mode(st)));
}
BENCHMARK(BM_RollingOls)->ArgsProduct({{0}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_TrainCnn(benchmark::State& st) {
  Rng rng(7);
  const std::size_t dim = 50, max_len = 100;
  std::vector<nlpml::Sample> samples;
  for (std::size_t i = 0; i < 256; ++i) {
    nlpml::Sample s;
    s.date = day0() + std::chrono::days(i);
    s.input = toy_input(random_rows(rng, 10 + uniform_index(rng, 60), dim), max_len);
    s.target = uniform(rng, 1.0, 2.0);
    samples.push_back(std::move(s));
  }
  nlpml::CnnConfig cfg;
  cfg.max_len = int(max_len);
  cfg.epochs = 2;
  cfg.l2_decay = 1e-3;
  for (auto _ : st) benchmark::DoNotOptimize(nlpml::train_model(samples, cfg, dim, nullptr, mode(st)));
}
BENCHMARK(BM_TrainCnn)->ArgsProduct({{0}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
