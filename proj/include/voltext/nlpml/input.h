#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voltext/common/matrix.h"
#include "voltext/embedding/model.h"

namespace voltext::nlpml {

inline constexpr char kPadToken[] = "NONE";
inline constexpr std::int32_t kFixedRow = -1;  // OOV: zero (Word2Vec) or subword vector (FastText)
inline constexpr std::int32_t kPadRow = -2;

// One day's model input. Only the real-token rows are stored; positions
// rows.rows() .. max_len-1 are padding (zero rows). A day without tokens sets
// `no_news`, and the model's trainable no-news vector fills row 0.
struct DayInput {
  std::vector<std::string> tokens;
  std::vector<std::int32_t> ids;  // vocabulary index or kFixedRow
  Matrix<double> rows;            // tokens.size() x M
  std::size_t max_len = 500;
  bool no_news = false;

  std::size_t length() const { return tokens.size(); }
  std::size_t dim() const { return rows.cols(); }
  // Length max_len; kPadRow at padding positions.
  std::vector<std::int32_t> padded_ids() const;
  std::vector<bool> pad_mask() const;
  std::vector<std::string> padded_tokens() const;
};

// First max_len tokens, embedded by lookup; the rest is padding.
DayInput build_day_input(const std::vector<std::string>& tokens,
                         const embedding::WordVectors& wv, std::size_t max_len = 500);

// The last n_days lists of `days` (oldest first). Days are filled newest
// first, each contributing its leading tokens, until max_len is reached; the
// kept tokens are then laid out oldest first. n_days = 1 equals
// build_day_input on the last day.
DayInput multi_day_input(const std::vector<std::vector<std::string>>& days,
                         const embedding::WordVectors& wv, std::size_t n_days,
                         std::size_t max_len = 500);

}  // namespace voltext::nlpml
