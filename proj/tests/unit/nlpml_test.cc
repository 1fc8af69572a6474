#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.h"
#include "voltext/common/error.h"
#include "voltext/common/rng.h"
#include "voltext/embedding/model.h"
#include "voltext/nlpml/adam.h"
#include "voltext/nlpml/checkpoint.h"
#include "voltext/nlpml/cnn.h"
#include "voltext/nlpml/input.h"
#include "voltext/nlpml/trainer.h"

using namespace voltext;
using namespace voltext::nlpml;
namespace fs = std::filesystem;

namespace {

Matrix<double> rand_rows(Rng& rng, std::size_t r, std::size_t c) {
  Matrix<double> m(r, c);
  for (auto& v : m.flat()) v = uniform(rng, -1, 1);
  return m;
}

CnnModel random_model(std::uint64_t seed, std::size_t dim, int max_len = 500) {
  CnnConfig cfg;
  cfg.max_len = max_len;
  CnnModel m(cfg, dim);
  m.initialize(seed, 1.0);
  Rng rng(seed + 99);
  for (std::size_t w = 0; w < m.widths(); ++w)
    for (std::size_t f = 0; f < m.filters(); ++f) m.params()[m.bias_offset(w, f)] = uniform(rng, -0.3, 0.3);
  return m;
}

embedding::WordVectors vocab_vectors() {
  Matrix<float> m(3, 2);
  m(0, 0) = 1.0f;
  m(1, 1) = 1.0f;
  m(2, 0) = m(2, 1) = 0.5f;
  return embedding::WordVectors({"up", "down", "flat"}, m);
}

std::vector<Sample> toy_samples(std::size_t n, std::size_t dim, std::size_t max_len, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.date = parse_date("2015-01-01") + std::chrono::days(i);
    s.input.max_len = max_len;
    const std::size_t len = 2 + uniform_index(rng, 6);
    s.input.rows = rand_rows(rng, len, dim);
    s.input.tokens.assign(len, "w");
    s.input.ids.assign(len, kFixedRow);
    s.target = 1.0 + s.input.rows(0, 0) * s.input.rows(0, 0);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST(Conv, ValidLengthsAndValues) {
  Rng rng(1);
  const auto x = rand_rows(rng, 12, 4);
  std::vector<double> k(3 * 4);
  for (auto& v : k) v = uniform(rng, -1, 1);
  const auto y = conv_valid(x, k, 3, 0.1);
  ASSERT_EQ(y.size(), 10u);
  for (std::size_t i = 0; i < y.size(); ++i) {
    double s = 0.1;
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 4; ++c) s += k[r * 4 + c] * x(i + r, c);
    EXPECT_NEAR(y[i], std::max(0.0, s), 1e-14);
  }
  EXPECT_EQ(conv_valid(x, k, 3, 0.1, Exec::kParallel), y);
  try {
    conv_valid(rand_rows(rng, 2, 4), k, 3, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKernelTooLarge);
  }
}

TEST(Cnn, ParameterLayout) {
  CnnConfig cfg;
  cfg.filter_widths = {3, 4, 5};
  cfg.filter_sets = 2;
  const std::size_t dim = 7;
  const CnnModel m(cfg, dim);
  EXPECT_EQ(CnnModel::parameter_count(cfg, dim), (3 + 4 + 5) * 2 * dim + 6 + 6 + 1 + dim);
  EXPECT_EQ(m.params().size(), CnnModel::parameter_count(cfg, dim));
  EXPECT_EQ(m.no_news_offset() + dim, m.params().size());
  std::size_t penalized = 0;
  for (std::size_t i = 0; i < m.params().size(); ++i) penalized += m.is_penalized(i);
  EXPECT_EQ(penalized, (3 + 4 + 5) * 2 * dim + 6);
}

TEST(Cnn, ForwardMatchesFullyPaddedOracle) {
  // Full 500-row computation against the implicit padding shortcut.
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto m = random_model(s, 6);
    Rng rng(s);
    const auto x = rand_rows(rng, 3 + uniform_index(rng, 40), 6);
    const double fast = forward_rows(x, false, 500, m, {}, nullptr);
    EXPECT_NEAR(fast, oracle::cnn_forward(m, x, 500), 1e-12);
    const auto mask = draw_dropout_mask(rng, m.pooled_size(), 0.5);
    EXPECT_NEAR(forward_rows(x, false, 500, m, mask, nullptr), oracle::cnn_forward(m, x, 500, mask), 1e-12);
  }
}

TEST(Cnn, NoNewsUsesTrainableVector) {
  auto m = random_model(3, 4, 20);
  DayInput in;
  in.max_len = 20;
  in.no_news = true;
  in.rows = Matrix<double>(0, 4);
  const auto rows = materialize(in, m);
  ASSERT_EQ(rows.rows(), 1u);
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(rows(0, c), m.no_news()[c]);
  std::vector<double> grad;
  loss_and_gradient(in, 10.0, m, {}, grad);
  double g = 0.0;
  for (std::size_t c = 0; c < 4; ++c) g += std::fabs(grad[m.no_news_offset() + c]);
  EXPECT_GT(g, 0.0);
}

TEST(Cnn, DropoutMaskIsInverted) {
  Rng rng(4);
  const auto mask = draw_dropout_mask(rng, 10000, 0.5);
  double kept = 0.0;
  for (double v : mask) {
    EXPECT_TRUE(v == 0.0 || v == 2.0);
    kept += v;
  }
  EXPECT_NEAR(kept / 10000.0, 1.0, 0.05);
}

TEST(Input, TruncatesAndPads) {
  const auto wv = vocab_vectors();
  const auto in = build_day_input({"up", "zzz", "down", "flat"}, wv, 3);
  EXPECT_EQ(in.length(), 3u);
  EXPECT_EQ(in.ids, (std::vector<std::int32_t>{0, kFixedRow, 1}));
  EXPECT_EQ(in.rows(1, 0), 0.0);
  EXPECT_EQ(in.rows(2, 1), 1.0);
  EXPECT_EQ(in.padded_ids().size(), 3u);
  const auto empty = build_day_input({}, wv, 5);
  EXPECT_TRUE(empty.no_news);
  EXPECT_EQ(empty.padded_tokens(), std::vector<std::string>(5, kPadToken));
}

TEST(Input, MultiDayFillsNewestFirst) {
  const auto wv = vocab_vectors();
  const std::vector<std::vector<std::string>> days{{"up", "up"}, {"down"}, {"flat", "flat", "flat"}};
  const auto in = multi_day_input(days, wv, 3, 5);
  EXPECT_EQ(in.tokens, (std::vector<std::string>{"up", "down", "flat", "flat", "flat"}));
  const auto two = multi_day_input(days, wv, 2, 500);
  EXPECT_EQ(two.tokens, (std::vector<std::string>{"down", "flat", "flat", "flat"}));
  EXPECT_EQ(multi_day_input(days, wv, 1, 500).tokens, build_day_input(days.back(), wv, 500).tokens);
}

TEST(Adam, FirstStepMatchesHandComputation) {
  std::vector<double> p{1.0, -2.0};
  const std::vector<double> g{0.5, -4.0};
  AdamState st(2);
  AdamHyper h;
  h.lr = 0.1;
  adam_step(p, g, st, h);
  // After one step m_hat = g and v_hat = g^2, so each coordinate moves lr * sign(g).
  EXPECT_NEAR(p[0], 1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-12);
  EXPECT_NEAR(p[1], -2.0 + 0.1 * 4.0 / (4.0 + 1e-8), 1e-12);
  const std::vector<double> bad{NAN, 0.0};
  try {
    adam_step(p, bad, st, h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteGradient);
  }
}

TEST(Config, Validation) {
  CnnConfig c;
  EXPECT_NO_THROW(c.validate());
  c.filter_sets = 0;
  EXPECT_THROW(c.validate(), Error);
  c = CnnConfig{};
  c.dropout_rate = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = CnnConfig{};
  c.max_len = 4;
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKernelTooLarge);
  }
}

TEST(Train, SerialEqualsParallelBitForBit) {
  const auto samples = toy_samples(70, 4, 16, 5);
  CnnConfig cfg;
  cfg.max_len = 16;
  cfg.epochs = 3;
  cfg.batch_size = 8;
  TrainStats sa, sb;
  const auto a = train_model(samples, cfg, 4, nullptr, Exec::kSerial, &sa);
  const auto b = train_model(samples, cfg, 4, nullptr, Exec::kParallel, &sb);
  EXPECT_EQ(a.model.params(), b.model.params());
  EXPECT_EQ(sa.epoch_losses, sb.epoch_losses);
}

TEST(Train, LossFallsOnLearnableTarget) {
  const auto samples = toy_samples(200, 4, 16, 6);
  CnnConfig cfg;
  cfg.max_len = 16;
  cfg.epochs = 30;
  cfg.l2_decay = 1e-4;
  cfg.dropout_rate = 0.0;
  cfg.adam.lr = 0.01;
  cfg.early_stop_patience = 100;
  TrainStats st;
  train_model(samples, cfg, 4, nullptr, Exec::kSerial, &st);
  EXPECT_LT(st.epoch_losses.back(), 0.8 * st.epoch_losses.front());
}

TEST(Train, TrainableEmbeddingMovesTable) {
  const auto wv = vocab_vectors();
  std::vector<Sample> samples;
  for (int i = 0; i < 40; ++i) {
    Sample s;
    s.input = build_day_input({i % 2 ? "up" : "down", "flat", "up"}, wv, 8);
    s.target = i % 2 ? 3.0 : 1.0;
    samples.push_back(s);
  }
  CnnConfig cfg;
  cfg.max_len = 8;
  cfg.epochs = 3;
  cfg.embedding_trainable = true;
  Matrix<double> table(3, 2);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 2; ++c) table(r, c) = wv.raw(r)[c];
  const auto m = train_model(samples, cfg, 2, &table, Exec::kSerial);
  ASSERT_TRUE(m.table.has_value());
  EXPECT_NE(m.table->storage(), table.storage());
}

TEST(Rolling, EventScheduleAndFilter) {
  const auto samples = toy_samples(60, 3, 8, 7);
  CnnConfig cfg;
  cfg.max_len = 8;
  cfg.epochs = 1;
  volatility::RollingProtocol p;
  p.train_len = 40;
  p.oos_len = 12;
  RollingTrainReport rep;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  const auto fc = train_rolling(samples, cfg, p, nullptr, Exec::kSerial, &rep,
                                [&](std::size_t, std::size_t a, std::size_t b, const TrainedModel&) {
                                  spans.emplace_back(a, b);
                                });
  EXPECT_EQ(rep.training_events, 3u);
  EXPECT_EQ(rep.event_starts, (std::vector<std::size_t>{0, 5, 10}));
  EXPECT_EQ(spans.back(), std::make_pair(std::size_t(10), std::size_t(12)));
  ASSERT_EQ(fc.size(), 12u);
  EXPECT_EQ(fc.dates.front(), samples[48].date);
  try {
    p.train_len = 55;
    train_rolling(samples, cfg, p, nullptr, Exec::kSerial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientHistory);
  }
}

TEST(Checkpoint, RoundTripKeepsFloatValues) {
  auto m = random_model(8, 5, 30);
  TrainedModel tm{m, std::nullopt};
  const auto path = fs::temp_directory_path() / "voltext_ckpt_test.vtxc";
  save_checkpoint(tm, path);
  const auto back = load_checkpoint(path);
  ASSERT_EQ(back.model.params().size(), m.params().size());
  for (std::size_t i = 0; i < m.params().size(); ++i)
    EXPECT_EQ(back.model.params()[i], double(float(m.params()[i])));
  EXPECT_EQ(back.model.config().filter_widths, m.config().filter_widths);
  EXPECT_EQ(back.model.config().max_len, 30);
  std::ofstream(path, std::ios::binary) << "garbage";
  EXPECT_THROW(load_checkpoint(path), Error);
  fs::remove(path);
}
