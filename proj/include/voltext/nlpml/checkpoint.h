#pragma once

#include <filesystem>

#include "voltext/nlpml/trainer.h"

namespace voltext::nlpml {

// Versioned binary: magic, version, config block, dimension, parameters and
// the optional fine-tuned embedding table, all little-endian with 32-bit
// floats for tensors. Loading restores the float-rounded values.
void save_checkpoint(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_checkpoint(const std::filesystem::path& path);

}  // namespace voltext::nlpml
