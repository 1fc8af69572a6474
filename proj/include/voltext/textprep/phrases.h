#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "voltext/textprep/tokenize.h"

namespace voltext::textprep {

struct PhraseOptions {
  long long min_count = 5;
  double threshold = 10.0;
  std::size_t max_vocab = 30'000'000;
  int passes = 1;  // >1 lets merged bigrams combine again (trigrams, ...)
  std::string delimiter = "_";
};

// Pairs accepted by the bigram scorer, keyed "a\x1fb".
class PhraseModel {
 public:
  PhraseModel() = default;
  explicit PhraseModel(std::string delimiter) : delimiter_(std::move(delimiter)) {}

  void add(const std::string& a, const std::string& b, double score);
  bool contains(const std::string& a, const std::string& b) const;
  std::size_t size() const { return pairs_.size(); }
  const std::unordered_map<std::string, double>& pairs() const { return pairs_; }
  const std::string& delimiter() const { return delimiter_; }

  // Greedy left-to-right merge; returns the number of merges performed.
  std::size_t apply(Sentence& sentence) const;

 private:
  std::string delimiter_ = "_";
  std::unordered_map<std::string, double> pairs_;
};

// score(a,b) = (count(ab) - min_count) * total / (count(a) * count(b))
double bigram_score(long long count_ab, long long count_a, long long count_b,
                    long long total, long long min_count);

// One scoring pass over the corpus. When the count table (unigrams and
// bigrams together) exceeds max_vocab entries only the most frequent are
// kept; pruned entries count as zero and are never merged.
PhraseModel learn_phrases(const SentenceCorpus& corpus, const PhraseOptions& opts);

struct PhraseResult {
  SentenceCorpus corpus;
  std::vector<PhraseModel> models;  // one per pass, apply in order
  std::size_t merges = 0;
};

PhraseResult detect_bigrams_with_models(const SentenceCorpus& corpus,
                                        const PhraseOptions& opts);
SentenceCorpus detect_bigrams(const SentenceCorpus& corpus, const PhraseOptions& opts);

// Tab-separated `pass a b score` lines, passes in application order.
void save_phrases(const std::vector<PhraseModel>& models, const std::filesystem::path& path);
std::vector<PhraseModel> load_phrases(const std::filesystem::path& path);

}  // namespace voltext::textprep
