#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voltext/common/matrix.h"
#include "voltext/common/parallel.h"
#include "voltext/embedding/model.h"

namespace voltext::embedding {

struct Neighbor {
  std::string token;
  std::int32_t index = -1;
  double cosine = 0.0;
};

// Cosine of every vocabulary vector with `query` (need not be unit length).
std::vector<double> cosine_scan(const WordVectors& wv, std::span<const double> query,
                                Exec exec = Exec::kParallel);

// Ranks by descending cosine, ties by index. `exclude` indices are skipped;
// top_n = 0 returns the full ranking.
std::vector<Neighbor> rank_by_cosine(const WordVectors& wv, std::span<const double> query,
                                     std::span<const std::int32_t> exclude = {},
                                     std::size_t top_n = 0, Exec exec = Exec::kParallel);

// 3CosAdd: cosine to unit(b) - unit(a) + unit(c). Throws TokenNotFound.
std::vector<Neighbor> analogy(const WordVectors& wv, std::string_view a, std::string_view b,
                              std::string_view c, bool exclude_inputs, std::size_t top_n = 0);

// "a:b :: c:X" with the top answer filled in.
std::string format_analogy(std::string_view a, std::string_view b, std::string_view c,
                           std::string_view answer);

struct AnalogyQuestion {
  std::string a, b, c, expected;
};

struct AnalogySection {
  std::string name;
  std::vector<AnalogyQuestion> questions;
};

std::vector<AnalogySection> parse_analogy_benchmark(std::istream& in);
std::vector<AnalogySection> load_analogy_benchmark(const std::string& path);

struct SectionScore {
  std::string name;
  std::size_t correct = 0;
  std::size_t answered = 0;
  std::size_t skipped = 0;
  // Empty when every question was skipped.
  std::optional<double> accuracy() const;
};

struct AnalogyReport {
  std::vector<SectionScore> sections;
  SectionScore overall;
};

AnalogyReport evaluate_analogy_suite(const std::vector<AnalogySection>& bench,
                                     const WordVectors& wv);

struct SimilarityPair {
  std::string a, b;
  double score = 0.0;
};

std::vector<SimilarityPair> parse_similarity_pairs(std::istream& in);
std::vector<SimilarityPair> load_similarity_pairs(const std::string& path);

struct SimilarityReport {
  double spearman = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

// Throws TooFewPairs with fewer than two resolvable pairs.
SimilarityReport evaluate_similarity(const std::vector<SimilarityPair>& pairs,
                                     const WordVectors& wv);

// Excludes the query token itself.
std::vector<Neighbor> most_similar(const WordVectors& wv, std::string_view token,
                                   std::size_t top_n);

// Token whose vector has the lowest cosine to the mean of the others' unit
// vectors. Needs at least three tokens.
std::string odd_one_out(const WordVectors& wv, const std::vector<std::string>& tokens);

struct PcaProjection {
  std::vector<std::string> tokens;
  Matrix<double> coords;      // tokens x dims
  Matrix<double> components;  // dims x M, unit rows
  std::vector<double> mean;
  std::vector<double> eigenvalues;
};

// Projections onto the leading eigenvectors of the sample covariance; each
// component's largest-magnitude entry is made positive.
PcaProjection pca_project(const WordVectors& wv, const std::vector<std::string>& tokens,
                          std::size_t dims = 2);
PcaProjection pca_project(const Matrix<double>& points, std::size_t dims = 2);

}  // namespace voltext::embedding
