#pragma once

#include <cstdint>
#include <string>

namespace voltext::embedding {

enum class Architecture { kSkipGram, kCbow };
enum class Algorithm { kWord2Vec, kFastText };

struct TrainConfig {
  Architecture mode = Architecture::kSkipGram;
  Algorithm algo = Algorithm::kWord2Vec;
  int window = 5;
  long long min_count = 5;
  std::size_t max_vocab = 0;  // 0 = unlimited
  int negatives = 5;
  int epochs = 5;
  double alpha0 = 0.025;
  double alpha_min = 0.0001;
  double ns_exponent = 0.75;
  int dim = 300;
  int ngram_min = 3;
  int ngram_max = 6;
  std::uint32_t buckets = 1u << 21;
  double sample = 0.0;  // frequent-token subsampling threshold; 0 disables it
  std::uint64_t seed = 1;
  int threads = 1;      // 1 = strict, bit-reproducible; >1 = lock-free workers

  void validate() const;
};

std::string to_string(Architecture a);
std::string to_string(Algorithm a);
Architecture parse_architecture(const std::string& s);
Algorithm parse_algorithm(const std::string& s);

}  // namespace voltext::embedding
