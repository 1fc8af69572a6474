#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "voltext/textprep/tokenize.h"

namespace voltext::embedding {

class Vocabulary {
 public:
  Vocabulary() = default;

  // Entries must already be ordered; index = position.
  void add(std::string token, long long count);
  void set_total_tokens(long long total) { total_tokens_ = total; }

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  long long count(std::size_t i) const { return counts_[i]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<long long>& counts() const { return counts_; }
  // Corpus tokens covered by the vocabulary (T).
  long long total_tokens() const { return total_tokens_; }

  // -1 when absent.
  std::int32_t find(std::string_view token) const;

  bool operator==(const Vocabulary& o) const {
    return tokens_ == o.tokens_ && counts_ == o.counts_ && total_tokens_ == o.total_tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<long long> counts_;
  std::unordered_map<std::string, std::int32_t> index_;
  long long total_tokens_ = 0;
};

// Drops tokens seen fewer than min_count times, orders by descending count
// (ties by first occurrence) and keeps at most max_vocab entries (0 = all).
// Throws EmptyVocabulary when nothing survives.
Vocabulary build_vocab(const textprep::SentenceCorpus& corpus, long long min_count,
                       std::size_t max_vocab = 0);

}  // namespace voltext::embedding
