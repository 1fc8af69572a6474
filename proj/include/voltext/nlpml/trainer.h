#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "voltext/common/forecast_series.h"
#include "voltext/common/parallel.h"
#include "voltext/nlpml/cnn.h"
#include "voltext/volatility/rolling.h"

namespace voltext::nlpml {

// A day's input and the realized variance it is meant to forecast; `date` is
// the date of that realized variance.
struct Sample {
  Date date;
  DayInput input;
  double target = 0.0;
};

struct TrainedModel {
  CnnModel model;
  // Fine-tuned copy of the word vectors, only with embedding_trainable.
  std::optional<Matrix<double>> table;

  double predict(const DayInput& input) const;
};

struct TrainStats {
  int epochs_run = 0;
  std::vector<double> epoch_losses;
};

// Mini-batch Adam on mean squared error plus the L2 penalty. Parameters start
// from a fresh seeded initialization (dense bias at the mean target). Dropout
// masks are drawn serially before each batch and per-sample gradients are
// summed in sample order, so Exec::kParallel reproduces Exec::kSerial
// bit for bit.
TrainedModel train_model(std::span<const Sample> samples, const CnnConfig& config,
                         std::size_t dim, const Matrix<double>* initial_table = nullptr,
                         Exec exec = Exec::kParallel, TrainStats* stats = nullptr);

struct RollingTrainReport {
  std::size_t training_events = 0;
  std::vector<std::size_t> event_starts;  // OOS offsets where a model was trained
  std::size_t filtered = 0;
  std::vector<TrainStats> stats;
};

// Called after each training event with the model and the OOS offsets
// [first, last) it forecasts.
using EventCallback =
    std::function<void(std::size_t event, std::size_t first, std::size_t last, const TrainedModel&)>;

// The last oos_len samples are forecast. Every retrain_every OOS days a model
// is trained from scratch on the train_len samples before that day (same seed
// each time) and used until the next event, so there are
// ceil(oos_len / retrain_every) events. Forecasts pass through the insanity
// filter of the training window. Throws InsufficientHistory when there are
// fewer than train_len + oos_len samples. `vectors` supplies the initial
// table when the embedding is trainable.
ForecastSeries train_rolling(std::span<const Sample> samples, const CnnConfig& config,
                             const volatility::RollingProtocol& protocol,
                             const embedding::WordVectors* vectors = nullptr,
                             Exec exec = Exec::kParallel, RollingTrainReport* report = nullptr,
                             const EventCallback& on_event = {});

}  // namespace voltext::nlpml
