#include "voltext/nlpml/trainer.h"

#include <cmath>
#include <numeric>

#include "voltext/common/error.h"
#include "voltext/common/rng.h"
#include "voltext/nlpml/adam.h"

namespace voltext::nlpml {

double TrainedModel::predict(const DayInput& input) const {
  return forward(input, model, nullptr, nullptr, table ? &*table : nullptr);
}

TrainedModel train_model(std::span<const Sample> samples, const CnnConfig& config,
                         std::size_t dim, const Matrix<double>* initial_table, Exec exec,
                         TrainStats* stats) {
  if (samples.empty()) fail(ErrorCode::kInsufficientHistory, "no training samples");
  if (config.embedding_trainable && !initial_table) {
    fail(ErrorCode::kConfigError, "a trainable embedding needs the word vectors");
  }
  double mean_target = 0.0;
  for (const auto& s : samples) mean_target += s.target;
  mean_target /= double(samples.size());

  TrainedModel tm{CnnModel(config, dim), std::nullopt};
  tm.model.initialize(config.seed, mean_target);
  if (config.embedding_trainable) tm.table = *initial_table;
  Matrix<double>* table = tm.table ? &*tm.table : nullptr;

  auto& params = tm.model.params();
  AdamState adam(params.size());
  AdamState table_adam(table ? table->size() : 0);
  std::vector<double> grad(params.size());
  std::vector<double> table_grad(table ? table->size() : 0);

  Rng rng(splitmix64(config.seed ^ 0xc0ffeeULL));
  const std::size_t n = samples.size();
  const std::size_t batch = std::size_t(config.batch_size);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<double>> masks(batch);
  std::vector<ForwardCache> caches(batch);

  TrainStats local;
  double prev = INFINITY;
  int stall = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t b0 = 0; b0 < n; b0 += batch) {
      const std::size_t bn = std::min(batch, n - b0);
      for (std::size_t b = 0; b < bn; ++b) {
        masks[b] = draw_dropout_mask(rng, tm.model.pooled_size(), config.dropout_rate);
      }
      auto run = [&](std::size_t b) {
        const auto& s = samples[order[b0 + b]];
        forward_rows(materialize(s.input, tm.model, table), s.input.no_news, s.input.max_len,
                     tm.model, masks[b], &caches[b]);
      };
      if (exec == Exec::kSerial) {
        for (std::size_t b = 0; b < bn; ++b) run(b);
      } else {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t b = 0; b < std::ptrdiff_t(bn); ++b) run(std::size_t(b));
      }

      std::fill(grad.begin(), grad.end(), 0.0);
      if (table) std::fill(table_grad.begin(), table_grad.end(), 0.0);
      double data_loss = 0.0;
      for (std::size_t b = 0; b < bn; ++b) {
        const auto& s = samples[order[b0 + b]];
        if (!table) {
          data_loss += backward(caches[b], s.target, tm.model, grad);
          continue;
        }
        Matrix<double> dx(caches[b].x.rows(), dim);
        data_loss += backward(caches[b], s.target, tm.model, grad, &dx);
        if (s.input.no_news) continue;
        for (std::size_t r = 0; r < s.input.ids.size(); ++r) {
          if (s.input.ids[r] < 0) continue;
          double* tg = table_grad.data() + std::size_t(s.input.ids[r]) * dim;
          for (std::size_t c = 0; c < dim; ++c) tg[c] += dx(r, c);
        }
      }
      const double inv = 1.0 / double(bn);
      for (auto& g : grad) g *= inv;
      add_regularization_gradient(tm.model, grad);
      epoch_loss += data_loss * inv + regularization(tm.model);
      ++batches;
      adam_step(params, grad, adam, config.adam);
      if (table) {
        for (auto& g : table_grad) g *= inv;
        adam_step(table->storage(), table_grad, table_adam, config.adam);
      }
    }
    epoch_loss /= double(batches);
    local.epoch_losses.push_back(epoch_loss);
    ++local.epochs_run;
    if (prev - epoch_loss < config.early_stop_tol) {
      if (++stall >= config.early_stop_patience) break;
    } else {
      stall = 0;
    }
    prev = std::min(prev, epoch_loss);
  }
  if (stats) *stats = std::move(local);
  return tm;
}

ForecastSeries train_rolling(std::span<const Sample> samples, const CnnConfig& config,
                             const volatility::RollingProtocol& protocol,
                             const embedding::WordVectors* vectors, Exec exec,
                             RollingTrainReport* report, const EventCallback& on_event) {
  config.validate();
  const std::size_t n = samples.size();
  if (protocol.train_len == 0 || protocol.oos_len == 0) {
    fail(ErrorCode::kInvalidArgument, "train_len and oos_len must be positive");
  }
  if (n < protocol.train_len + protocol.oos_len) {
    fail(ErrorCode::kInsufficientHistory,
         std::to_string(n) + " samples, need " + std::to_string(protocol.train_len + protocol.oos_len));
  }
  std::size_t dim = 0;
  for (const auto& s : samples) {
    if (!s.input.no_news) {
      dim = s.input.dim();
      break;
    }
  }
  if (vectors) dim = vectors->dim();
  if (dim == 0) fail(ErrorCode::kShapeMismatch, "cannot infer the embedding dimension");

  std::optional<Matrix<double>> initial;
  if (config.embedding_trainable) {
    if (!vectors) fail(ErrorCode::kConfigError, "a trainable embedding needs the word vectors");
    initial = Matrix<double>(vectors->size(), dim);
    for (std::size_t i = 0; i < vectors->size(); ++i) {
      auto v = vectors->raw(i);
      std::copy(v.begin(), v.end(), initial->row(i).begin());
    }
  }

  const std::size_t start = n - protocol.oos_len;
  const std::size_t every = std::size_t(config.retrain_every);
  RollingTrainReport rep;
  ForecastSeries out;
  out.model_id = "NLPML";
  for (std::size_t first = 0, event = 0; first < protocol.oos_len; first += every, ++event) {
    const std::size_t last = std::min(first + every, protocol.oos_len);
    auto window = samples.subspan(start + first - protocol.train_len, protocol.train_len);
    TrainStats st;
    auto tm = train_model(window, config, dim, initial ? &*initial : nullptr, exec, &st);
    std::vector<double> train_rvs;
    train_rvs.reserve(window.size());
    for (const auto& s : window) train_rvs.push_back(s.target);
    for (std::size_t o = first; o < last; ++o) {
      const auto& s = samples[start + o];
      double raw = tm.predict(s.input);
      double f = volatility::insanity_filter(raw, train_rvs);
      if (f != raw) ++rep.filtered;
      out.push_back(s.date, s.target, f);
    }
    rep.event_starts.push_back(first);
    rep.stats.push_back(std::move(st));
    ++rep.training_events;
    if (on_event) on_event(event, first, last, tm);
  }
  if (report) *report = std::move(rep);
  return out;
}

}  // namespace voltext::nlpml
