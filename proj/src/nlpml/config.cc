#include "voltext/nlpml/config.h"

#include <string>

#include "voltext/common/error.h"

namespace voltext::nlpml {

void CnnConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::kConfigError, what); };
  if (filter_widths.empty()) bad("at least one filter width is required");
  if (max_len < 1) bad("max_len must be positive");
  for (int w : filter_widths) {
    if (w < 1) bad("filter widths must be positive");
    if (w > max_len) {
      fail(ErrorCode::kKernelTooLarge,
           "filter width " + std::to_string(w) + " exceeds input length " + std::to_string(max_len));
    }
  }
  if (filter_sets < 1) bad("filter_sets must be positive");
  if (!(dropout_rate >= 0 && dropout_rate < 1)) bad("dropout_rate must be in [0,1)");
  if (l2_decay < 0) bad("l2_decay must be non-negative");
  if (!(adam.lr > 0) || adam.beta1 < 0 || adam.beta1 >= 1 || adam.beta2 < 0 || adam.beta2 >= 1 ||
      !(adam.eps > 0)) {
    bad("invalid Adam hyperparameters");
  }
  if (retrain_every < 1) bad("retrain_every must be positive");
  if (input_days < 1) bad("input_days must be positive");
  if (epochs < 0) bad("epochs must be non-negative");
  if (batch_size < 1) bad("batch_size must be positive");
  if (early_stop_patience < 1) bad("early_stop_patience must be positive");
}

}  // namespace voltext::nlpml
