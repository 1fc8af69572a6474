#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace voltext::textprep {

using Sentence = std::vector<std::string>;

struct SentenceCorpus {
  std::vector<Sentence> sentences;
  std::map<std::string, long long> token_counts;

  // Recomputes token_counts from sentences and drops empty sentences.
  void recount();
  long long total_tokens() const;
  void add(Sentence s);
};

// Sentences end at '.', '!' or '?' followed by whitespace or end of text.
// Tokens are whitespace separated. Tokens containing a digit are numeric and
// kept verbatim (currency symbols and suffixes included, e.g. "$4.2m"); only
// wrapping quotes/brackets and trailing ",;:" are removed from them. Other
// tokens lose leading/trailing punctuation but keep inner characters
// ("s&p", "u.s", "e-mail").
std::vector<Sentence> tokenize(std::string_view cleaned);

}  // namespace voltext::textprep
