#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace voltext::embedding {

// Character n-grams of "<token>" with n in [nmin, nmax], counted in UTF-8
// code points. The full wrapped token is not an n-gram; it is the token's
// own row. "profit", n=3 -> <pr pro rof ofi fit it>.
std::vector<std::string> char_ngrams(std::string_view token, int nmin, int nmax);

// 32-bit FNV-1a over signed bytes, the hash fastText uses for n-gram buckets.
std::uint32_t ngram_hash(std::string_view s);

// Maps tokens to the rows of the FastText input matrix. Rows [0, N) are
// whole-token rows, rows [N, N + buckets) are hashed n-gram rows.
class SubwordIndex {
 public:
  SubwordIndex() = default;
  SubwordIndex(std::size_t vocab_size, int nmin, int nmax, std::uint32_t buckets)
      : vocab_size_(vocab_size), nmin_(nmin), nmax_(nmax), buckets_(buckets) {}

  std::vector<std::int32_t> ngram_rows(std::string_view token) const;

  int nmin() const { return nmin_; }
  int nmax() const { return nmax_; }
  std::uint32_t buckets() const { return buckets_; }

 private:
  std::size_t vocab_size_ = 0;
  int nmin_ = 3;
  int nmax_ = 6;
  std::uint32_t buckets_ = 0;
};

}  // namespace voltext::embedding
