#pragma once

#include <cstdint>
#include <vector>

namespace voltext::nlpml {

struct AdamHyper {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Filter-set counts explored in the original grid.
inline constexpr int kFilterSetGrid[] = {3, 8, 13, 18, 23, 28, 33, 38, 43};

struct CnnConfig {
  std::vector<int> filter_widths{3, 4, 5};
  int filter_sets = 3;  // F kernels per width
  double dropout_rate = 0.5;
  double l2_decay = 3.0;
  AdamHyper adam;
  std::uint64_t seed = 1;
  int retrain_every = 5;
  bool embedding_trainable = false;
  int input_days = 1;
  int max_len = 500;
  int epochs = 20;
  int batch_size = 32;
  double early_stop_tol = 1e-6;
  int early_stop_patience = 3;

  // Throws ConfigError, or KernelTooLarge for a width above max_len.
  void validate() const;
};

}  // namespace voltext::nlpml
