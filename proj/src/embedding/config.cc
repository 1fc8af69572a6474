#include "voltext/embedding/config.h"

#include "voltext/common/error.h"

namespace voltext::embedding {

void TrainConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::kConfigError, what); };
  if (window < 1) bad("window must be >= 1");
  if (min_count < 1) bad("min_count must be >= 1");
  if (negatives < 1) bad("negatives must be >= 1");
  if (epochs < 0) bad("epochs must be >= 0");
  if (dim < 1) bad("dim must be >= 1");
  if (!(alpha0 >= alpha_min) || alpha_min < 0) bad("need alpha0 >= alpha_min >= 0");
  if (algo == Algorithm::kFastText) {
    if (ngram_min < 1 || ngram_max < ngram_min) bad("need 1 <= ngram_min <= ngram_max");
    if (buckets == 0) bad("FastText needs buckets > 0");
  }
  if (threads < 1) bad("threads must be >= 1");
}

std::string to_string(Architecture a) {
  return a == Architecture::kSkipGram ? "skipgram" : "cbow";
}

std::string to_string(Algorithm a) {
  return a == Algorithm::kWord2Vec ? "word2vec" : "fasttext";
}

Architecture parse_architecture(const std::string& s) {
  if (s == "skipgram" || s == "skip-gram" || s == "sg") return Architecture::kSkipGram;
  if (s == "cbow") return Architecture::kCbow;
  fail(ErrorCode::kConfigError, "unknown architecture '" + s + "'");
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "word2vec" || s == "w2v") return Algorithm::kWord2Vec;
  if (s == "fasttext" || s == "ft") return Algorithm::kFastText;
  fail(ErrorCode::kConfigError, "unknown algorithm '" + s + "'");
}

}  // namespace voltext::embedding
