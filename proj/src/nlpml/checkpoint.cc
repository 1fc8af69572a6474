#include "voltext/nlpml/checkpoint.h"

#include <fstream>

#include "voltext/common/binio.h"
#include "voltext/common/error.h"

namespace voltext::nlpml {

namespace {

constexpr char kMagic[5] = "VTXC";
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_checkpoint(const TrainedModel& tm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  const auto& c = tm.model.config();
  binio::put_magic(out, kMagic);
  binio::put_u32(out, kVersion);
  binio::put_u32(out, std::uint32_t(c.filter_widths.size()));
  for (int w : c.filter_widths) binio::put_u32(out, std::uint32_t(w));
  binio::put_u32(out, std::uint32_t(c.filter_sets));
  binio::put_f64(out, c.dropout_rate);
  binio::put_f64(out, c.l2_decay);
  binio::put_f64(out, c.adam.lr);
  binio::put_f64(out, c.adam.beta1);
  binio::put_f64(out, c.adam.beta2);
  binio::put_f64(out, c.adam.eps);
  binio::put_u64(out, c.seed);
  binio::put_u32(out, std::uint32_t(c.retrain_every));
  binio::put_u32(out, c.embedding_trainable ? 1u : 0u);
  binio::put_u32(out, std::uint32_t(c.input_days));
  binio::put_u32(out, std::uint32_t(c.max_len));
  binio::put_u32(out, std::uint32_t(c.epochs));
  binio::put_u32(out, std::uint32_t(c.batch_size));
  binio::put_f64(out, c.early_stop_tol);
  binio::put_u32(out, std::uint32_t(c.early_stop_patience));

  binio::put_u64(out, tm.model.dim());
  binio::put_u64(out, tm.model.params().size());
  for (double p : tm.model.params()) binio::put_f32(out, float(p));
  binio::put_u64(out, tm.table ? tm.table->rows() : 0);
  if (tm.table) {
    for (double v : tm.table->storage()) binio::put_f32(out, float(v));
  }
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

TrainedModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  binio::expect_magic(in, kMagic);
  auto version = binio::get_u32(in);
  if (version != kVersion) fail(ErrorCode::kFormatError, "unsupported checkpoint version");
  CnnConfig c;
  auto nw = binio::get_u32(in);
  if (nw == 0 || nw > 64) fail(ErrorCode::kFormatError, "bad filter width count");
  c.filter_widths.clear();
  for (std::uint32_t i = 0; i < nw; ++i) c.filter_widths.push_back(int(binio::get_u32(in)));
  c.filter_sets = int(binio::get_u32(in));
  c.dropout_rate = binio::get_f64(in);
  c.l2_decay = binio::get_f64(in);
  c.adam.lr = binio::get_f64(in);
  c.adam.beta1 = binio::get_f64(in);
  c.adam.beta2 = binio::get_f64(in);
  c.adam.eps = binio::get_f64(in);
  c.seed = binio::get_u64(in);
  c.retrain_every = int(binio::get_u32(in));
  c.embedding_trainable = binio::get_u32(in) != 0;
  c.input_days = int(binio::get_u32(in));
  c.max_len = int(binio::get_u32(in));
  c.epochs = int(binio::get_u32(in));
  c.batch_size = int(binio::get_u32(in));
  c.early_stop_tol = binio::get_f64(in);
  c.early_stop_patience = int(binio::get_u32(in));
  auto dim = binio::get_u64(in);
  if (dim == 0 || dim > (1u << 16)) fail(ErrorCode::kFormatError, "bad embedding dimension");
  TrainedModel tm;
  try {
    tm.model = CnnModel(c, dim);
  } catch (const Error& e) {
    fail(ErrorCode::kFormatError, std::string("bad config block: ") + e.what());
  }
  auto np = binio::get_u64(in);
  if (np != tm.model.params().size()) fail(ErrorCode::kFormatError, "parameter count mismatch");
  for (auto& p : tm.model.params()) p = binio::get_f32(in);
  auto rows = binio::get_u64(in);
  if (rows > (1ull << 28)) fail(ErrorCode::kFormatError, "bad table size");
  if (rows) {
    tm.table = Matrix<double>(rows, dim);
    for (auto& v : tm.table->storage()) v = binio::get_f32(in);
  }
  return tm;
}

}  // namespace voltext::nlpml
