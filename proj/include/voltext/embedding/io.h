#pragma once

#include <string>

#include "voltext/embedding/model.h"

namespace voltext::embedding {

enum class EmbeddingFormat { kText, kBinary };

EmbeddingFormat parse_embedding_format(const std::string& s);

// Text: "N M" header then one "token v1 ... vM" line per vocabulary entry
// (composed vectors, so FastText rows already include their n-grams).
// Binary: the complete model (config, vocabulary, both matrices); loading it
// back gives bitwise-equal matrices.
void save_embedding(const EmbeddingModel& model, const std::string& path, EmbeddingFormat format);

void save_embedding_text(const WordVectors& wv, const std::string& path);
WordVectors load_embedding_text(const std::string& path);

void save_embedding_binary(const EmbeddingModel& model, const std::string& path);
EmbeddingModel load_embedding_binary(const std::string& path);

// Either format, sniffed from the first bytes. Binary FastText models keep
// their OOV resolver.
WordVectors load_word_vectors(const std::string& path);

}  // namespace voltext::embedding
