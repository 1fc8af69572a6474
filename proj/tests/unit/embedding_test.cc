#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <filesystem>
#include <sstream>

#include "oracles.h"
#include "voltext/common/error.h"
#include "voltext/embedding/evaluate.h"
#include "voltext/embedding/io.h"
#include "voltext/embedding/kernels.h"
#include "voltext/embedding/sampler.h"
#include "voltext/embedding/subword.h"
#include "voltext/embedding/train.h"
#include "voltext/embedding/vocab.h"

using namespace voltext;
using namespace voltext::embedding;
namespace fs = std::filesystem;

namespace {

textprep::SentenceCorpus small_corpus() {
  textprep::SentenceCorpus c;
  Rng rng(3);
  for (int s = 0; s < 400; ++s) {
    textprep::Sentence sent;
    const char* p = s % 2 ? "b" : "a";
    for (int i = 0; i < 6; ++i) sent.push_back(p + std::to_string(uniform_index(rng, 10)));
    c.add(sent);
  }
  c.recount();
  return c;
}

WordVectors toy_vectors() {
  Matrix<float> m(4, 2);
  m(0, 0) = 1.0f;                  // east
  m(1, 0) = 0.9f, m(1, 1) = 0.1f;  // northeast-ish
  m(2, 1) = 1.0f;                  // north
  m(3, 0) = -1.0f;                 // west
  return WordVectors({"east", "ene", "north", "west"}, m);
}

}  // namespace

TEST(Vocab, MinCountOrderAndCap) {
  textprep::SentenceCorpus c;
  c.add({"b", "a", "c", "a", "b", "d"});
  c.add({"a", "e", "e"});
  c.recount();
  const auto v = build_vocab(c, 2);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v.token(0), "a");
  EXPECT_EQ(v.token(1), "b");  // ties go to first occurrence
  EXPECT_EQ(v.token(2), "e");
  EXPECT_EQ(v.total_tokens(), 7);
  EXPECT_EQ(build_vocab(c, 2, 1).size(), 1u);
  EXPECT_EQ(v.find("zzz"), -1);
  try {
    build_vocab(c, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyVocabulary);
  }
}

TEST(Sampler, MatchesCountPowerLaw) {
  const std::vector<long long> counts{100, 50, 20, 10, 5, 1};
  const UnigramSampler s(counts, 0.75);
  double z = 0.0;
  for (auto c : counts) z += std::pow(double(c), 0.75);
  std::vector<double> seen(counts.size(), 0.0);
  Rng rng(4);
  const int n = 200000;
  for (int i = 0; i < n; ++i) seen[std::size_t(s.draw(rng))] += 1.0;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double p = std::pow(double(counts[i]), 0.75) / z;
    EXPECT_NEAR(s.probability(i), p, 1e-12);
    chi2 += std::pow(seen[i] - n * p, 2) / (n * p);
  }
  const boost::math::chi_squared dist(double(counts.size() - 1));
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 1e-3);
}

TEST(Sampler, ExclusionRedraws) {
  const std::vector<long long> counts{5, 5};
  const UnigramSampler s(counts, 0.75);
  Rng rng(1);
  std::vector<std::int32_t> out;
  s.draw(rng, 50, 0, out);
  ASSERT_EQ(out.size(), 50u);
  for (auto v : out) EXPECT_EQ(v, 1);
}

TEST(Subword, NgramsOfProfit) {
  EXPECT_EQ(char_ngrams("profit", 3, 3),
            (std::vector<std::string>{"<pr", "pro", "rof", "ofi", "fit", "it>"}));
  // The wrapped token itself is the whole-token row, not an n-gram.
  EXPECT_EQ(char_ngrams("ab", 3, 4), (std::vector<std::string>{"<ab", "ab>"}));
  // Multi-byte characters count once.
  EXPECT_EQ(char_ngrams("\xc3\xa9t", 3, 3), (std::vector<std::string>{"<\xc3\xa9t", "\xc3\xa9t>"}));
}

TEST(Subword, FnvHash) {
  EXPECT_EQ(ngram_hash(""), 2166136261u);
  EXPECT_EQ(ngram_hash("a"), 0xe40c292cu);
  EXPECT_EQ(ngram_hash("foobar"), 0xbf9cf968u);
}

TEST(Kernels, PairStepIsMinusAlphaTimesGradient) {
  Rng rng(5);
  Matrix<double> in(6, 4), out(6, 4);
  for (auto& v : in.flat()) v = uniform(rng, -0.5, 0.5);
  for (auto& v : out.flat()) v = uniform(rng, -0.5, 0.5);
  const std::vector<std::int32_t> target{2}, negs{1, 4, 4};
  const auto h = sum_rows(in, target);
  const auto g = ns_gradient<double>(h, out, 3, negs);
  auto in2 = in, out2 = out;
  const double alpha = 0.1;
  const double loss = sgns_pair_step(in2, out2, target, 3, negs, alpha);
  EXPECT_NEAR(loss, g.loss, 1e-14);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(in2(2, i), in(2, i) - alpha * g.hidden[i], 1e-15);
  std::vector<double> expect4(4, 0.0);
  for (const auto& [row, grad] : g.output_rows)
    if (row == 4)
      for (std::size_t i = 0; i < 4; ++i) expect4[i] += grad[i];
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(out2(4, i), out(4, i) - alpha * expect4[i], 1e-15);
}

TEST(Kernels, SgnsLossDecreasesAlongTheStep) {
  Rng rng(6);
  Matrix<double> in(5, 8), out(5, 8);
  for (auto& v : in.flat()) v = uniform(rng, -0.5, 0.5);
  for (auto& v : out.flat()) v = uniform(rng, -0.5, 0.5);
  const std::vector<std::int32_t> target{0, 3}, negs{1, 2};
  const double before = sgns_loss(in, out, target, 4, negs);
  sgns_pair_step(in, out, target, 4, negs, 0.01);
  EXPECT_LT(sgns_loss(in, out, target, 4, negs), before);
}

TEST(Kernels, SoftmaxSumsToOne) {
  Rng rng(7);
  Matrix<double> out(7, 3);
  for (auto& v : out.flat()) v = uniform(rng, -2, 2);
  const std::vector<double> h{0.3, -1.0, 2.0};
  const auto p = softmax_probabilities<double>(h, out);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-14);
}

TEST(Kernels, EmptyCbowContextIsNoOp) {
  Matrix<double> in(2, 2, 0.5), out(2, 2, 0.5);
  std::vector<std::vector<std::int32_t>> ctx;
  const std::vector<std::int32_t> negs{1};
  EXPECT_EQ(cbow_step<double>(in, out, ctx, 0, negs, 0.1), 0.0);
  EXPECT_EQ(out(0, 0), 0.5);
}

TEST(Train, SameSeedSameVectors) {
  const auto c = small_corpus();
  TrainConfig tc;
  tc.dim = 8;
  tc.min_count = 1;
  tc.epochs = 2;
  const auto a = train(c, tc), b = train(c, tc);
  EXPECT_EQ(a.input().storage(), b.input().storage());
  tc.seed = 2;
  EXPECT_NE(train(c, tc).input().storage(), a.input().storage());
}

TEST(Train, FastTextResolvesUnseenTokens) {
  const auto c = small_corpus();
  TrainConfig tc;
  tc.dim = 8;
  tc.min_count = 1;
  tc.epochs = 1;
  tc.algo = Algorithm::kFastText;
  tc.buckets = 1000;
  tc.ngram_min = 2;
  tc.ngram_max = 3;
  const auto m = train(c, tc);
  const auto wv = WordVectors::from_model(m);
  EXPECT_TRUE(wv.can_resolve("a77"));
  EXPECT_EQ(wv.resolve("a77").size(), 8u);
  try {
    m.rows_for("");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSubwords);
  }
  tc.algo = Algorithm::kWord2Vec;
  const auto w2v = train(c, tc);
  try {
    w2v.rows_for("a77");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTokenNotFound);
  }
}

TEST(Io, BinaryRoundTripIsBitwise) {
  const auto c = small_corpus();
  TrainConfig tc;
  tc.dim = 6;
  tc.min_count = 1;
  tc.epochs = 1;
  const auto m = train(c, tc);
  const auto path = (fs::temp_directory_path() / "voltext_emb_test.bin").string();
  save_embedding_binary(m, path);
  const auto back = load_embedding_binary(path);
  EXPECT_EQ(back.input().storage(), m.input().storage());
  EXPECT_EQ(back.output().storage(), m.output().storage());
  EXPECT_TRUE(back.vocab() == m.vocab());
  const auto wv = load_word_vectors(path);
  EXPECT_EQ(wv.size(), m.vocab().size());
  fs::remove(path);
}

TEST(Io, TextRoundTrip) {
  const auto wv = toy_vectors();
  const auto path = (fs::temp_directory_path() / "voltext_emb_test.txt").string();
  save_embedding_text(wv, path);
  const auto back = load_word_vectors(path);
  ASSERT_EQ(back.size(), 4u);
  EXPECT_EQ(back.token(1), "ene");
  EXPECT_FLOAT_EQ(back.raw(1)[0], 0.9f);
  fs::remove(path);
}

TEST(Evaluate, NeighborsAndOddOneOut) {
  const auto wv = toy_vectors();
  const auto nn = most_similar(wv, "east", 2);
  ASSERT_EQ(nn.size(), 2u);
  EXPECT_EQ(nn[0].token, "ene");
  EXPECT_EQ(nn[1].token, "north");
  EXPECT_EQ(odd_one_out(wv, {"east", "ene", "west"}), "west");
}

TEST(Evaluate, CosineScanSerialEqualsParallel) {
  Rng rng(8);
  Matrix<float> m(300, 16);
  std::vector<std::string> toks;
  for (std::size_t i = 0; i < 300; ++i) {
    toks.push_back("t" + std::to_string(i));
    for (auto& v : m.row(i)) v = float(uniform(rng, -1, 1));
  }
  const WordVectors wv(toks, m);
  std::vector<double> q(16);
  for (auto& v : q) v = uniform(rng, -1, 1);
  EXPECT_EQ(cosine_scan(wv, q, Exec::kSerial), cosine_scan(wv, q, Exec::kParallel));
}

TEST(Evaluate, AnalogySkipsUnknownWords) {
  const auto wv = toy_vectors();
  std::stringstream bench(": dirs\neast west north south\neast ene east ene\n");
  const auto r = evaluate_analogy_suite(parse_analogy_benchmark(bench), wv);
  EXPECT_EQ(r.overall.skipped, 1u);
  EXPECT_EQ(r.overall.answered, 1u);
}

TEST(Evaluate, PcaMatchesJacobiOracle) {
  Rng rng(9);
  Matrix<double> pts(40, 5);
  for (std::size_t r = 0; r < 40; ++r) {
    const double t = uniform(rng, -3, 3);
    for (std::size_t c = 0; c < 5; ++c) pts(r, c) = t * double(c + 1) + uniform(rng, -0.5, 0.5);
  }
  const auto p = pca_project(pts, 2);
  oracle::Dense cov(5, std::vector<double>(5, 0.0));
  std::vector<double> mean(5, 0.0);
  for (std::size_t r = 0; r < 40; ++r)
    for (std::size_t c = 0; c < 5; ++c) mean[c] += pts(r, c) / 40.0;
  for (std::size_t r = 0; r < 40; ++r)
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) cov[i][j] += (pts(r, i) - mean[i]) * (pts(r, j) - mean[j]) / 39.0;
  std::vector<double> vals;
  oracle::Dense vecs;
  oracle::jacobi_eigen(cov, vals, vecs);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_NEAR(p.eigenvalues[k], vals[k], 1e-9 * vals[0]);
    double d = 0.0;
    for (std::size_t i = 0; i < 5; ++i) d += p.components(k, i) * vecs[i][k];
    EXPECT_NEAR(std::fabs(d), 1.0, 1e-9);
  }
}
