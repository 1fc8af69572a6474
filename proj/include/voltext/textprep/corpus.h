#pragma once

#include <filesystem>
#include <vector>

#include "voltext/textprep/clean.h"
#include "voltext/textprep/news.h"
#include "voltext/textprep/tokenize.h"

namespace voltext::textprep {

// Cleans headline and body of every item separately. Fields that fail the
// short-item checks become empty; items with neither field left are dropped.
std::vector<RawNewsItem> clean_corpus(const std::vector<RawNewsItem>& items,
                                      const std::vector<CleanRule>& rules);

// Tokenized sentences of already-cleaned headlines and bodies, in item order.
SentenceCorpus sentences_from(const std::vector<RawNewsItem>& cleaned);

// One sentence per line, tokens separated by single spaces.
void write_sentences(const SentenceCorpus& corpus, const std::filesystem::path& path);
SentenceCorpus read_sentences(const std::filesystem::path& path);

}  // namespace voltext::textprep
