#include "voltext/textprep/phrases.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "voltext/common/csv.h"
#include "voltext/common/error.h"

namespace voltext::textprep {

namespace {

std::string key(const std::string& a, const std::string& b) {
  std::string k;
  k.reserve(a.size() + b.size() + 1);
  k += a;
  k += '\x1f';
  k += b;
  return k;
}

struct CountEntry {
  long long count = 0;
  std::size_t first_seen = 0;
};

void prune(std::unordered_map<std::string, CountEntry>& table, std::size_t max_vocab) {
  if (table.size() <= max_vocab) return;
  std::vector<std::pair<const std::string*, CountEntry>> entries;
  entries.reserve(table.size());
  for (const auto& [k, v] : table) entries.emplace_back(&k, v);
  std::nth_element(entries.begin(), entries.begin() + std::ptrdiff_t(max_vocab), entries.end(),
                   [](const auto& x, const auto& y) {
                     if (x.second.count != y.second.count) return x.second.count > y.second.count;
                     return x.second.first_seen < y.second.first_seen;
                   });
  std::unordered_map<std::string, CountEntry> kept;
  for (std::size_t i = 0; i < max_vocab; ++i) kept.emplace(*entries[i].first, entries[i].second);
  table = std::move(kept);
}

}  // namespace

void PhraseModel::add(const std::string& a, const std::string& b, double score) {
  pairs_[key(a, b)] = score;
}

bool PhraseModel::contains(const std::string& a, const std::string& b) const {
  return pairs_.count(key(a, b)) > 0;
}

std::size_t PhraseModel::apply(Sentence& sentence) const {
  if (pairs_.empty() || sentence.size() < 2) return 0;
  Sentence out;
  out.reserve(sentence.size());
  std::size_t merges = 0;
  std::size_t i = 0;
  while (i < sentence.size()) {
    if (i + 1 < sentence.size() && contains(sentence[i], sentence[i + 1])) {
      out.push_back(sentence[i] + delimiter_ + sentence[i + 1]);
      i += 2;
      ++merges;
    } else {
      out.push_back(std::move(sentence[i]));
      ++i;
    }
  }
  sentence = std::move(out);
  return merges;
}

double bigram_score(long long count_ab, long long count_a, long long count_b,
                    long long total, long long min_count) {
  if (count_a <= 0 || count_b <= 0) return -std::numeric_limits<double>::infinity();
  return double(count_ab - min_count) * double(total) / (double(count_a) * double(count_b));
}

PhraseModel learn_phrases(const SentenceCorpus& corpus, const PhraseOptions& opts) {
  if (opts.min_count < 1) fail(ErrorCode::kInvalidArgument, "min_count must be >= 1");
  if (!(opts.threshold > 0)) fail(ErrorCode::kInvalidArgument, "threshold must be > 0");
  std::unordered_map<std::string, CountEntry> table;
  std::vector<std::pair<std::string, std::string>> candidates;
  std::size_t seen = 0;
  long long total = 0;
  for (const auto& s : corpus.sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      ++total;
      auto& u = table[s[i]];
      if (u.count++ == 0) u.first_seen = seen;
      ++seen;
      if (i + 1 < s.size()) {
        auto& b = table[key(s[i], s[i + 1])];
        if (b.count++ == 0) {
          b.first_seen = seen;
          candidates.emplace_back(s[i], s[i + 1]);
        }
        ++seen;
      }
    }
  }
  prune(table, opts.max_vocab);
  auto count_of = [&](const std::string& k) -> long long {
    auto it = table.find(k);
    return it == table.end() ? 0 : it->second.count;
  };
  PhraseModel model(opts.delimiter);
  for (const auto& [a, b] : candidates) {
    long long ab = count_of(key(a, b));
    if (ab == 0) continue;
    double score = bigram_score(ab, count_of(a), count_of(b), total, opts.min_count);
    if (score > opts.threshold) model.add(a, b, score);
  }
  return model;
}

PhraseResult detect_bigrams_with_models(const SentenceCorpus& corpus,
                                        const PhraseOptions& opts) {
  PhraseResult result;
  result.corpus = corpus;
  for (int pass = 0; pass < std::max(1, opts.passes); ++pass) {
    auto model = learn_phrases(result.corpus, opts);
    std::size_t merges = 0;
    for (auto& s : result.corpus.sentences) merges += model.apply(s);
    result.merges += merges;
    result.models.push_back(std::move(model));
    if (merges == 0) break;
  }
  result.corpus.recount();
  return result;
}

SentenceCorpus detect_bigrams(const SentenceCorpus& corpus, const PhraseOptions& opts) {
  return detect_bigrams_with_models(corpus, opts).corpus;
}

void save_phrases(const std::vector<PhraseModel>& models, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << "# delimiter\t" << (models.empty() ? std::string("_") : models.front().delimiter()) << "\n";
  char buf[64];
  for (std::size_t p = 0; p < models.size(); ++p) {
    // Sorted so the file is byte-identical across runs.
    std::vector<std::pair<std::string, double>> pairs(models[p].pairs().begin(), models[p].pairs().end());
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [key, score] : pairs) {
      auto sep = key.find('\x1f');
      std::snprintf(buf, sizeof buf, "%.17g", score);
      out << p << '\t' << key.substr(0, sep) << '\t' << key.substr(sep + 1) << '\t' << buf << '\n';
    }
  }
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

std::vector<PhraseModel> load_phrases(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::string delimiter = "_";
  std::vector<PhraseModel> models;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_line(line, '\t');
    if (line[0] == '#') {
      if (f.size() == 2 && f[0] == "# delimiter") delimiter = f[1];
      continue;
    }
    if (f.size() != 4) {
      fail(ErrorCode::kFormatError, path.string() + ":" + std::to_string(lineno) + ": expected pass, a, b, score");
    }
    auto pass = std::size_t(parse_double(f[0]));
    if (pass > 64) fail(ErrorCode::kFormatError, "pass index out of range");
    while (models.size() <= pass) models.emplace_back(delimiter);
    models[pass].add(f[1], f[2], parse_double(f[3]));
  }
  return models;
}

}  // namespace voltext::textprep
