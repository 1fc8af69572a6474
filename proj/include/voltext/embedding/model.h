#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "voltext/common/matrix.h"
#include "voltext/embedding/config.h"
#include "voltext/embedding/subword.h"
#include "voltext/embedding/vocab.h"

namespace voltext::embedding {

// Trained (or initialized) embedding: input vectors u_w for targets and
// output vectors for the context side. For FastText the input matrix holds
// N whole-token rows followed by `buckets` hashed n-gram rows.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(TrainConfig config, Vocabulary vocab);

  const TrainConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  std::size_t dim() const { return std::size_t(config_.dim); }
  bool is_fasttext() const { return config_.algo == Algorithm::kFastText; }

  Matrix<float>& input() { return input_; }
  Matrix<float>& output() { return output_; }
  const Matrix<float>& input() const { return input_; }
  const Matrix<float>& output() const { return output_; }

  const SubwordIndex& subwords() const { return subwords_; }

  // Input rows summed to form a token's vector: {id} for Word2Vec,
  // {id} + n-gram rows for FastText, n-gram rows alone for FastText OOV.
  // Throws TokenNotFound (Word2Vec OOV) or NoSubwords (FastText OOV without
  // any n-gram).
  std::vector<std::int32_t> rows_for(std::string_view token) const;
  // Cached rows for an in-vocabulary id.
  std::span<const std::int32_t> rows_for(std::int32_t id) const;

  std::vector<float> word_vector(std::string_view token) const;

  // Draws input rows uniformly in [-0.5/M, 0.5/M] and zeroes the output rows.
  void initialize(std::uint64_t seed);

  void set_matrices(Matrix<float> input, Matrix<float> output);

 private:
  void build_row_cache();

  TrainConfig config_;
  Vocabulary vocab_;
  SubwordIndex subwords_;
  Matrix<float> input_;
  Matrix<float> output_;
  std::vector<std::vector<std::int32_t>> row_cache_;
};

// Unit-normalizable lookup table used by every evaluation routine.
class WordVectors {
 public:
  using OovResolver = std::function<std::optional<std::vector<float>>(std::string_view)>;

  WordVectors() = default;
  WordVectors(std::vector<std::string> tokens, Matrix<float> vectors);
  // Composed token vectors; FastText models also resolve OOV tokens through
  // `model`, which must outlive the returned object.
  static WordVectors from_model(const EmbeddingModel& model);

  std::size_t size() const { return tokens_.size(); }
  std::size_t dim() const { return vectors_.cols(); }
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::int32_t find(std::string_view token) const;

  std::span<const float> raw(std::size_t i) const { return vectors_.row(i); }
  std::span<const double> unit(std::size_t i) const { return unit_.row(i); }
  const Matrix<float>& vectors() const { return vectors_; }
  const Matrix<double>& unit_vectors() const { return unit_; }

  void set_oov_resolver(OovResolver r) { resolver_ = std::move(r); }
  bool can_resolve(std::string_view token) const;
  // Raw vector; in-vocabulary lookup first, then the OOV resolver.
  // Throws TokenNotFound.
  std::vector<double> resolve(std::string_view token) const;

 private:
  std::vector<std::string> tokens_;
  Matrix<float> vectors_;
  Matrix<double> unit_;
  std::unordered_map<std::string, std::int32_t> index_;
  OovResolver resolver_;
};

}  // namespace voltext::embedding
