#include "voltext/textprep/corpus.h"

#include <fstream>

#include "voltext/common/error.h"

namespace voltext::textprep {

namespace {

std::string clean_or_empty(const std::string& text, const std::vector<CleanRule>& rules) {
  if (text.empty()) return {};
  try {
    return clean_text(text, rules);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTooShort || e.code() == ErrorCode::kEmptyAfterClean) return {};
    throw;
  }
}

}  // namespace

std::vector<RawNewsItem> clean_corpus(const std::vector<RawNewsItem>& items,
                                      const std::vector<CleanRule>& rules) {
  std::vector<RawNewsItem> out(items.size());
  std::vector<char> keep(items.size(), 0);
  // Cleaning is pure per item.
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < items.size(); ++i) {
    RawNewsItem c = items[i];
    c.headline = clean_or_empty(items[i].headline, rules);
    c.body = clean_or_empty(items[i].body, rules);
    keep[i] = !(c.headline.empty() && c.body.empty());
    out[i] = std::move(c);
  }
  std::vector<RawNewsItem> kept;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (keep[i]) kept.push_back(std::move(out[i]));
  }
  return kept;
}

SentenceCorpus sentences_from(const std::vector<RawNewsItem>& cleaned) {
  SentenceCorpus corpus;
  for (const auto& item : cleaned) {
    for (auto& s : tokenize(item.headline)) corpus.add(std::move(s));
    for (auto& s : tokenize(item.body)) corpus.add(std::move(s));
  }
  return corpus;
}

void write_sentences(const SentenceCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& s : corpus.sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out << ' ';
      out << s[i];
    }
    out << '\n';
  }
}

SentenceCorpus read_sentences(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + path.string());
  SentenceCorpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    Sentence s;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\r') ++j;
      if (j > i) s.emplace_back(line.substr(i, j - i));
      i = j;
    }
    corpus.add(std::move(s));
  }
  return corpus;
}

}  // namespace voltext::textprep
