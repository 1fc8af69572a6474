#include "voltext/embedding/vocab.h"

#include <algorithm>

#include "voltext/common/error.h"

namespace voltext::embedding {

void Vocabulary::add(std::string token, long long count) {
  auto id = std::int32_t(tokens_.size());
  if (!index_.emplace(token, id).second) {
    fail(ErrorCode::kInvalidArgument, "duplicate vocabulary token '" + token + "'");
  }
  tokens_.push_back(std::move(token));
  counts_.push_back(count);
}

std::int32_t Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : it->second;
}

Vocabulary build_vocab(const textprep::SentenceCorpus& corpus, long long min_count,
                       std::size_t max_vocab) {
  struct Entry {
    std::string token;
    long long count = 0;
    std::size_t first = 0;
  };
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<Entry> entries;
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s) {
      auto [it, inserted] = slot.emplace(t, entries.size());
      if (inserted) entries.push_back({t, 0, entries.size()});
      ++entries[it->second].count;
    }
  }
  std::erase_if(entries, [&](const Entry& e) { return e.count < min_count; });
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.count > b.count; });
  if (max_vocab > 0 && entries.size() > max_vocab) entries.resize(max_vocab);
  if (entries.empty()) {
    fail(ErrorCode::kEmptyVocabulary,
         "no token reaches min_count=" + std::to_string(min_count));
  }
  Vocabulary vocab;
  long long total = 0;
  for (auto& e : entries) {
    total += e.count;
    vocab.add(std::move(e.token), e.count);
  }
  vocab.set_total_tokens(total);
  return vocab;
}

}  // namespace voltext::embedding
