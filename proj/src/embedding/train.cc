#include "voltext/embedding/train.h"

#include <atomic>
#include <cmath>

#include <omp.h>

#include "voltext/common/error.h"
#include "voltext/common/rng.h"
#include "voltext/embedding/kernels.h"
#include "voltext/embedding/sampler.h"

namespace voltext::embedding {

namespace {

using Ids = std::vector<std::int32_t>;

std::vector<Ids> encode(const textprep::SentenceCorpus& corpus, const Vocabulary& vocab) {
  std::vector<Ids> out;
  out.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) {
    Ids ids;
    for (const auto& t : s) {
      auto id = vocab.find(t);
      if (id >= 0) ids.push_back(id);
    }
    if (!ids.empty()) out.push_back(std::move(ids));
  }
  return out;
}

// Keep probability for word2vec-style subsampling of frequent tokens.
std::vector<double> keep_probabilities(const Vocabulary& vocab, double sample) {
  std::vector<double> keep(vocab.size(), 1.0);
  if (sample <= 0) return keep;
  const double t = sample * double(vocab.total_tokens());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    double f = double(vocab.count(i));
    keep[i] = std::min(1.0, (std::sqrt(f / t) + 1.0) * t / f);
  }
  return keep;
}

struct Worker {
  EmbeddingModel& model;
  const UnigramSampler& sampler;
  const std::vector<double>& keep;
  const TrainConfig& cfg;
  Rng rng;
  NsWorkspace ws;
  Ids negatives;
  Ids kept;
  std::vector<Ids> context;
  long long pairs = 0;

  void sentence(const Ids& ids, double alpha) {
    kept.clear();
    for (auto id : ids) {
      if (keep[std::size_t(id)] >= 1.0 || uniform01(rng) < keep[std::size_t(id)]) kept.push_back(id);
    }
    auto& input = model.input();
    auto& output = model.output();
    const auto n = std::ptrdiff_t(kept.size());
    for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
      const auto radius = std::ptrdiff_t(1 + uniform_index(rng, std::uint64_t(cfg.window)));
      const auto lo = std::max<std::ptrdiff_t>(0, pos - radius);
      const auto hi = std::min<std::ptrdiff_t>(n - 1, pos + radius);
      const std::int32_t center = kept[std::size_t(pos)];
      if (cfg.mode == Architecture::kSkipGram) {
        auto target_rows = model.rows_for(center);
        for (auto c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const std::int32_t ctx = kept[std::size_t(c)];
          sampler.draw(rng, cfg.negatives, ctx, negatives);
          sgns_pair_step(input, output, target_rows, ctx, std::span<const std::int32_t>(negatives),
                         alpha, ws);
          ++pairs;
        }
      } else {
        context.clear();
        for (auto c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          auto r = model.rows_for(kept[std::size_t(c)]);
          context.emplace_back(r.begin(), r.end());
        }
        if (context.empty()) continue;
        sampler.draw(rng, cfg.negatives, center, negatives);
        cbow_step(input, output, std::span<const Ids>(context), center,
                  std::span<const std::int32_t>(negatives), alpha, ws);
        ++pairs;
      }
    }
  }
};

}  // namespace

double learning_rate(const TrainConfig& config, long long done, long long total) {
  if (total <= 0) return config.alpha0;
  double frac = std::min(1.0, double(done) / double(total));
  return std::max(config.alpha_min, config.alpha0 - (config.alpha0 - config.alpha_min) * frac);
}

EmbeddingModel train(const textprep::SentenceCorpus& corpus, const TrainConfig& config,
                     TrainStats* stats) {
  config.validate();
  auto vocab = build_vocab(corpus, config.min_count, config.max_vocab);
  EmbeddingModel model(config, std::move(vocab));
  model.initialize(config.seed);
  train_in_place(model, corpus, stats);
  return model;
}

void train_in_place(EmbeddingModel& model, const textprep::SentenceCorpus& corpus,
                    TrainStats* stats) {
  const auto& cfg = model.config();
  if (model.vocab().empty()) fail(ErrorCode::kEmptyVocabulary, "cannot train without vocabulary");
  const auto sentences = encode(corpus, model.vocab());
  UnigramSampler sampler(model.vocab().counts(), cfg.ns_exponent);
  const auto keep = keep_probabilities(model.vocab(), cfg.sample);

  long long corpus_tokens = 0;
  for (const auto& s : sentences) corpus_tokens += std::ptrdiff_t(s.size());
  const long long total = corpus_tokens * cfg.epochs;
  TrainStats local;

  if (cfg.threads <= 1) {
    Worker w{model, sampler, keep, cfg, Rng(splitmix64(cfg.seed ^ 0x5eedULL)), {}, {}, {}, {}};
    long long done = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      for (const auto& s : sentences) {
        w.sentence(s, learning_rate(cfg, done, total));
        done += std::ptrdiff_t(s.size());
      }
    }
    local.processed_tokens = done;
    local.pair_updates = w.pairs;
    local.final_alpha = learning_rate(cfg, done, total);
  } else {
    // Lock-free shared updates: workers race on rows of both matrices. The
    // result depends on scheduling.
    std::atomic<long long> done{0};
    std::atomic<long long> pairs{0};
    const std::size_t n_sent = sentences.size();
#pragma omp parallel num_threads(cfg.threads)
    {
      const int tid = omp_get_thread_num();
      const int nt = omp_get_num_threads();
      Worker w{model, sampler, keep, cfg, stream_rng(cfg.seed, std::uint64_t(tid)), {}, {}, {}, {}};
      for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = std::size_t(tid); i < n_sent; i += std::size_t(nt)) {
          w.sentence(sentences[i], learning_rate(cfg, done.load(std::memory_order_relaxed), total));
          done.fetch_add(std::ptrdiff_t(sentences[i].size()), std::memory_order_relaxed);
        }
      }
      pairs.fetch_add(w.pairs);
    }
    local.processed_tokens = done.load();
    local.pair_updates = pairs.load();
    local.final_alpha = learning_rate(cfg, local.processed_tokens, total);
  }
  if (stats) *stats = local;
}

}  // namespace voltext::embedding
