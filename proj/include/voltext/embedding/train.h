#pragma once

#include "voltext/embedding/config.h"
#include "voltext/embedding/model.h"
#include "voltext/textprep/tokenize.h"

namespace voltext::embedding {

struct TrainStats {
  long long processed_tokens = 0;
  long long pair_updates = 0;
  double final_alpha = 0.0;
};

// Builds the vocabulary, initializes, and trains. With config.threads == 1
// the result is a pure function of (corpus, config).
EmbeddingModel train(const textprep::SentenceCorpus& corpus, const TrainConfig& config,
                     TrainStats* stats = nullptr);

// Trains an already initialized model in place.
void train_in_place(EmbeddingModel& model, const textprep::SentenceCorpus& corpus,
                    TrainStats* stats = nullptr);

// alpha0 -> alpha_min linearly over `total` updates, never below alpha_min.
double learning_rate(const TrainConfig& config, long long done, long long total);

}  // namespace voltext::embedding
