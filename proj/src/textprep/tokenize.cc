#include "voltext/textprep/tokenize.h"

#include <numeric>

namespace voltext::textprep {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c >= 0x80;
}

bool has_digit(std::string_view s) {
  for (char c : s) {
    if (c >= '0' && c <= '9') return true;
  }
  return false;
}

std::string normalize_token(std::string_view t) {
  if (has_digit(t)) {
    auto wrap = [](char c) {
      return c == '"' || c == '\'' || c == '(' || c == ')' || c == '[' || c == ']' ||
             c == '{' || c == '}' || c == ',' || c == ';' || c == ':';
    };
    while (!t.empty() && wrap(t.front()) && t.front() != ',' && t.front() != ';' &&
           t.front() != ':') {
      t.remove_prefix(1);
    }
    while (!t.empty() && wrap(t.back())) t.remove_suffix(1);
    return std::string(t);
  }
  std::size_t b = 0, e = t.size();
  while (b < e && !is_word_char(static_cast<unsigned char>(t[b]))) ++b;
  while (e > b && !is_word_char(static_cast<unsigned char>(t[e - 1]))) --e;
  std::string out(t.substr(b, e - b));
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = char(c - 'A' + 'a');
  }
  return out;
}

Sentence split_tokens(std::string_view s) {
  Sentence out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) {
      auto tok = normalize_token(s.substr(i, j - i));
      if (!tok.empty()) out.push_back(std::move(tok));
    }
    i = j;
  }
  return out;
}

}  // namespace

std::vector<Sentence> tokenize(std::string_view cleaned) {
  std::vector<Sentence> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= cleaned.size(); ++i) {
    bool end = i == cleaned.size();
    bool boundary = !end && (cleaned[i] == '.' || cleaned[i] == '!' || cleaned[i] == '?') &&
                    (i + 1 == cleaned.size() || is_space(cleaned[i + 1]));
    if (!end && !boundary) continue;
    auto sentence = split_tokens(cleaned.substr(start, i - start));
    if (!sentence.empty()) sentences.push_back(std::move(sentence));
    start = i + 1;
  }
  return sentences;
}

void SentenceCorpus::recount() {
  std::erase_if(sentences, [](const Sentence& s) { return s.empty(); });
  token_counts.clear();
  for (const auto& s : sentences) {
    for (const auto& t : s) ++token_counts[t];
  }
}

long long SentenceCorpus::total_tokens() const {
  return std::accumulate(token_counts.begin(), token_counts.end(), 0LL,
                         [](long long acc, const auto& kv) { return acc + kv.second; });
}

void SentenceCorpus::add(Sentence s) {
  if (s.empty()) return;
  for (const auto& t : s) ++token_counts[t];
  sentences.push_back(std::move(s));
}

}  // namespace voltext::textprep
