#include "voltext/nlpml/input.h"

#include <algorithm>

#include "voltext/common/error.h"

namespace voltext::nlpml {

std::vector<std::int32_t> DayInput::padded_ids() const {
  std::vector<std::int32_t> out(max_len, kPadRow);
  std::copy(ids.begin(), ids.end(), out.begin());
  return out;
}

std::vector<bool> DayInput::pad_mask() const {
  std::vector<bool> out(max_len, true);
  std::fill(out.begin(), out.begin() + std::ptrdiff_t(length()), false);
  return out;
}

std::vector<std::string> DayInput::padded_tokens() const {
  std::vector<std::string> out(max_len, kPadToken);
  std::copy(tokens.begin(), tokens.end(), out.begin());
  return out;
}

DayInput build_day_input(const std::vector<std::string>& tokens, const embedding::WordVectors& wv,
                         std::size_t max_len) {
  if (max_len == 0) fail(ErrorCode::kInvalidArgument, "max_len must be positive");
  DayInput in;
  in.max_len = max_len;
  const std::size_t n = std::min(tokens.size(), max_len);
  in.tokens.assign(tokens.begin(), tokens.begin() + std::ptrdiff_t(n));
  in.no_news = n == 0;
  in.rows = Matrix<double>(n, wv.dim());
  in.ids.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto id = wv.find(in.tokens[r]);
    in.ids[r] = id >= 0 ? id : kFixedRow;
    if (id >= 0) {
      auto v = wv.raw(std::size_t(id));
      std::copy(v.begin(), v.end(), in.rows.row(r).begin());
    } else if (wv.can_resolve(in.tokens[r])) {
      auto v = wv.resolve(in.tokens[r]);
      std::copy(v.begin(), v.end(), in.rows.row(r).begin());
    }
  }
  return in;
}

DayInput multi_day_input(const std::vector<std::vector<std::string>>& days,
                         const embedding::WordVectors& wv, std::size_t n_days,
                         std::size_t max_len) {
  if (n_days == 0) fail(ErrorCode::kInvalidArgument, "n_days must be positive");
  const std::size_t first = days.size() > n_days ? days.size() - n_days : 0;
  std::vector<std::size_t> take(days.size(), 0);
  std::size_t room = max_len;
  for (std::size_t d = days.size(); d-- > first && room > 0;) {
    take[d] = std::min(days[d].size(), room);
    room -= take[d];
  }
  std::vector<std::string> tokens;
  for (std::size_t d = first; d < days.size(); ++d) {
    tokens.insert(tokens.end(), days[d].begin(), days[d].begin() + std::ptrdiff_t(take[d]));
  }
  return build_day_input(tokens, wv, max_len);
}

}  // namespace voltext::nlpml
