#include "voltext/embedding/io.h"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "voltext/common/binio.h"
#include "voltext/common/csv.h"
#include "voltext/common/error.h"

namespace voltext::embedding {

namespace {

constexpr char kMagic[5] = "VTXE";
constexpr std::uint32_t kVersion = 1;

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path);
  return out;
}

void put_matrix(std::ostream& out, const Matrix<float>& m) {
  binio::put_u64(out, m.rows());
  binio::put_u64(out, m.cols());
  for (float v : m.storage()) binio::put_f32(out, v);
}

Matrix<float> get_matrix(std::istream& in, std::size_t rows, std::size_t cols) {
  auto r = binio::get_u64(in);
  auto c = binio::get_u64(in);
  if (r != rows || c != cols) fail(ErrorCode::kFormatError, "matrix shape does not match header");
  Matrix<float> m(rows, cols);
  for (auto& v : m.storage()) v = binio::get_f32(in);
  return m;
}

}  // namespace

EmbeddingFormat parse_embedding_format(const std::string& s) {
  if (s == "text" || s == "txt" || s == "vec") return EmbeddingFormat::kText;
  if (s == "binary" || s == "bin") return EmbeddingFormat::kBinary;
  fail(ErrorCode::kInvalidArgument, "unknown embedding format '" + s + "'");
}

void save_embedding(const EmbeddingModel& model, const std::string& path, EmbeddingFormat format) {
  if (format == EmbeddingFormat::kBinary) {
    save_embedding_binary(model, path);
  } else {
    save_embedding_text(WordVectors::from_model(model), path);
  }
}

void save_embedding_text(const WordVectors& wv, const std::string& path) {
  auto out = open_out(path, false);
  out << wv.size() << ' ' << wv.dim() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < wv.size(); ++i) {
    out << wv.token(i);
    for (float v : wv.raw(i)) {
      std::snprintf(buf, sizeof buf, " %.9g", double(v));
      out << buf;
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path);
}

WordVectors load_embedding_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kFormatError, path + ": empty file");
  std::size_t n = 0, m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m) || m == 0) fail(ErrorCode::kFormatError, path + ": bad header '" + line + "'");
  }
  std::vector<std::string> tokens;
  tokens.reserve(n);
  Matrix<float> vecs(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    if (!std::getline(in, line)) {
      fail(ErrorCode::kFormatError, path + ": expected " + std::to_string(n) + " rows, got " + std::to_string(r));
    }
    auto fields = split_line(trim(line), ' ');
    if (fields.size() != m + 1) {
      fail(ErrorCode::kFormatError, path + ": row " + std::to_string(r + 1) + " has " +
                                        std::to_string(fields.size() - 1) + " values");
    }
    tokens.push_back(fields[0]);
    for (std::size_t c = 0; c < m; ++c) vecs(r, c) = float(parse_double(fields[c + 1]));
  }
  return WordVectors(std::move(tokens), std::move(vecs));
}

void save_embedding_binary(const EmbeddingModel& model, const std::string& path) {
  auto out = open_out(path, true);
  const auto& c = model.config();
  binio::put_magic(out, kMagic);
  binio::put_u32(out, kVersion);
  binio::put_u32(out, std::uint32_t(c.mode));
  binio::put_u32(out, std::uint32_t(c.algo));
  binio::put_u32(out, std::uint32_t(c.window));
  binio::put_i64(out, c.min_count);
  binio::put_u64(out, c.max_vocab);
  binio::put_u32(out, std::uint32_t(c.negatives));
  binio::put_u32(out, std::uint32_t(c.epochs));
  binio::put_f64(out, c.alpha0);
  binio::put_f64(out, c.alpha_min);
  binio::put_f64(out, c.ns_exponent);
  binio::put_f64(out, c.sample);
  binio::put_u32(out, std::uint32_t(c.dim));
  binio::put_u32(out, std::uint32_t(c.ngram_min));
  binio::put_u32(out, std::uint32_t(c.ngram_max));
  binio::put_u32(out, c.buckets);
  binio::put_u64(out, c.seed);
  binio::put_u32(out, std::uint32_t(c.threads));

  const auto& v = model.vocab();
  binio::put_u64(out, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    binio::put_string(out, v.token(i));
    binio::put_i64(out, v.count(i));
  }
  binio::put_i64(out, v.total_tokens());
  put_matrix(out, model.input());
  put_matrix(out, model.output());
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path);
}

EmbeddingModel load_embedding_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  binio::expect_magic(in, kMagic);
  auto version = binio::get_u32(in);
  if (version != kVersion) fail(ErrorCode::kFormatError, "unsupported version " + std::to_string(version));
  TrainConfig c;
  auto mode = binio::get_u32(in);
  auto algo = binio::get_u32(in);
  if (mode > 1 || algo > 1) fail(ErrorCode::kFormatError, "bad architecture/algorithm tag");
  c.mode = Architecture(mode);
  c.algo = Algorithm(algo);
  c.window = int(binio::get_u32(in));
  c.min_count = binio::get_i64(in);
  c.max_vocab = binio::get_u64(in);
  c.negatives = int(binio::get_u32(in));
  c.epochs = int(binio::get_u32(in));
  c.alpha0 = binio::get_f64(in);
  c.alpha_min = binio::get_f64(in);
  c.ns_exponent = binio::get_f64(in);
  c.sample = binio::get_f64(in);
  c.dim = int(binio::get_u32(in));
  c.ngram_min = int(binio::get_u32(in));
  c.ngram_max = int(binio::get_u32(in));
  c.buckets = binio::get_u32(in);
  c.seed = binio::get_u64(in);
  c.threads = int(binio::get_u32(in));
  try {
    c.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kFormatError, std::string("bad config block: ") + e.what());
  }

  Vocabulary vocab;
  auto n = binio::get_u64(in);
  if (n > (1ull << 32)) fail(ErrorCode::kFormatError, "vocabulary size out of range");
  for (std::uint64_t i = 0; i < n; ++i) {
    auto tok = binio::get_string(in);
    vocab.add(std::move(tok), binio::get_i64(in));
  }
  vocab.set_total_tokens(binio::get_i64(in));

  EmbeddingModel model(c, std::move(vocab));
  auto input = get_matrix(in, model.input().rows(), model.dim());
  auto output = get_matrix(in, model.output().rows(), model.dim());
  model.set_matrices(std::move(input), std::move(output));
  return model;
}

WordVectors load_word_vectors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  char head[4] = {};
  in.read(head, 4);
  in.close();
  if (std::string_view(head, 4) != std::string_view(kMagic, 4)) return load_embedding_text(path);
  auto model = std::make_shared<const EmbeddingModel>(load_embedding_binary(path));
  auto wv = WordVectors::from_model(*model);
  if (model->is_fasttext()) {
    wv.set_oov_resolver([model](std::string_view t) -> std::optional<std::vector<float>> {
      try {
        return model->word_vector(t);
      } catch (const Error&) {
        return std::nullopt;
      }
    });
  }
  return wv;
}

}  // namespace voltext::embedding
