#include "voltext/embedding/subword.h"

namespace voltext::embedding {

std::vector<std::string> char_ngrams(std::string_view token, int nmin, int nmax) {
  std::string wrapped = "<" + std::string(token) + ">";
  // Byte offsets of code point starts, plus the end.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < wrapped.size(); ++i) {
    if ((static_cast<unsigned char>(wrapped[i]) & 0xC0) != 0x80) starts.push_back(i);
  }
  const std::size_t n_chars = starts.size();
  starts.push_back(wrapped.size());
  std::vector<std::string> grams;
  for (std::size_t i = 0; i < n_chars; ++i) {
    for (int n = nmin; n <= nmax; ++n) {
      std::size_t j = i + std::size_t(n);
      if (j > n_chars) break;
      if (i == 0 && j == n_chars) continue;  // the whole token
      grams.push_back(wrapped.substr(starts[i], starts[j] - starts[i]));
    }
  }
  return grams;
}

std::uint32_t ngram_hash(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (char c : s) {
    h ^= std::uint32_t(std::int8_t(c));
    h *= 16777619u;
  }
  return h;
}

std::vector<std::int32_t> SubwordIndex::ngram_rows(std::string_view token) const {
  std::vector<std::int32_t> rows;
  if (buckets_ == 0) return rows;
  for (const auto& g : char_ngrams(token, nmin_, nmax_)) {
    rows.push_back(std::int32_t(vocab_size_ + ngram_hash(g) % buckets_));
  }
  return rows;
}

}  // namespace voltext::embedding
