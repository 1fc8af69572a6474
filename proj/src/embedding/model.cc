#include "voltext/embedding/model.h"

#include <cmath>

#include "voltext/common/error.h"
#include "voltext/common/rng.h"

namespace voltext::embedding {

EmbeddingModel::EmbeddingModel(TrainConfig config, Vocabulary vocab)
    : config_(std::move(config)), vocab_(std::move(vocab)) {
  config_.validate();
  std::size_t rows = vocab_.size();
  if (is_fasttext()) {
    subwords_ = SubwordIndex(vocab_.size(), config_.ngram_min, config_.ngram_max,
                             config_.buckets);
    rows += config_.buckets;
  }
  input_ = Matrix<float>(rows, dim());
  output_ = Matrix<float>(vocab_.size(), dim());
  build_row_cache();
}

void EmbeddingModel::build_row_cache() {
  row_cache_.assign(vocab_.size(), {});
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    row_cache_[i].push_back(std::int32_t(i));
    if (is_fasttext()) {
      for (auto r : subwords_.ngram_rows(vocab_.token(i))) row_cache_[i].push_back(r);
    }
  }
}

std::span<const std::int32_t> EmbeddingModel::rows_for(std::int32_t id) const {
  return row_cache_[std::size_t(id)];
}

std::vector<std::int32_t> EmbeddingModel::rows_for(std::string_view token) const {
  auto id = vocab_.find(token);
  if (id >= 0) {
    auto r = rows_for(id);
    return {r.begin(), r.end()};
  }
  if (!is_fasttext()) {
    fail(ErrorCode::kTokenNotFound, "'" + std::string(token) + "' is not in the vocabulary");
  }
  auto rows = subwords_.ngram_rows(token);
  if (rows.empty()) {
    fail(ErrorCode::kNoSubwords, "'" + std::string(token) + "' has no character n-grams");
  }
  return rows;
}

std::vector<float> EmbeddingModel::word_vector(std::string_view token) const {
  auto rows = rows_for(token);
  std::vector<double> acc(dim(), 0.0);
  for (auto r : rows) {
    auto v = input_.row(std::size_t(r));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += double(v[i]);
  }
  return {acc.begin(), acc.end()};
}

void EmbeddingModel::initialize(std::uint64_t seed) {
  Rng rng(seed);
  const double half = 0.5 / double(dim());
  for (auto& x : input_.storage()) x = float(uniform(rng, -half, half));
  output_.fill(0.0f);
}

void EmbeddingModel::set_matrices(Matrix<float> input, Matrix<float> output) {
  std::size_t expect = vocab_.size() + (is_fasttext() ? config_.buckets : 0);
  if (input.rows() != expect || input.cols() != dim() || output.rows() != vocab_.size() ||
      output.cols() != dim()) {
    fail(ErrorCode::kShapeMismatch, "embedding matrices do not match vocabulary/config");
  }
  input_ = std::move(input);
  output_ = std::move(output);
}

WordVectors::WordVectors(std::vector<std::string> tokens, Matrix<float> vectors)
    : tokens_(std::move(tokens)), vectors_(std::move(vectors)) {
  if (tokens_.size() != vectors_.rows()) {
    fail(ErrorCode::kShapeMismatch, "token list and vector rows differ");
  }
  unit_ = Matrix<double>(vectors_.rows(), vectors_.cols());
  for (std::size_t r = 0; r < tokens_.size(); ++r) {
    index_.emplace(tokens_[r], std::int32_t(r));
    auto v = vectors_.row(r);
    double n = std::sqrt(dot<float, float>(v, v));
    auto u = unit_.row(r);
    for (std::size_t i = 0; i < v.size(); ++i) u[i] = n > 0 ? double(v[i]) / n : 0.0;
  }
}

WordVectors WordVectors::from_model(const EmbeddingModel& model) {
  const auto& vocab = model.vocab();
  Matrix<float> vecs(vocab.size(), model.dim());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    auto v = model.word_vector(vocab.token(i));
    std::copy(v.begin(), v.end(), vecs.row(i).begin());
  }
  WordVectors wv(vocab.tokens(), std::move(vecs));
  if (model.is_fasttext()) {
    const EmbeddingModel* m = &model;
    wv.set_oov_resolver([m](std::string_view t) -> std::optional<std::vector<float>> {
      try {
        return m->word_vector(t);
      } catch (const Error&) {
        return std::nullopt;
      }
    });
  }
  return wv;
}

std::int32_t WordVectors::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : it->second;
}

bool WordVectors::can_resolve(std::string_view token) const {
  if (find(token) >= 0) return true;
  return resolver_ && resolver_(token).has_value();
}

std::vector<double> WordVectors::resolve(std::string_view token) const {
  auto id = find(token);
  if (id >= 0) {
    auto v = raw(std::size_t(id));
    return {v.begin(), v.end()};
  }
  if (resolver_) {
    if (auto v = resolver_(token)) return {v->begin(), v->end()};
  }
  fail(ErrorCode::kTokenNotFound, "'" + std::string(token) + "' is not in the vocabulary");
}

}  // namespace voltext::embedding
