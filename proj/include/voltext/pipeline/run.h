#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "voltext/common/parallel.h"
#include "voltext/pipeline/config.h"

namespace voltext::pipeline {

inline constexpr char kVersion[] = "0.1.0";

struct RunOptions {
  // Explicit run directory; otherwise <outputs>/run-NNN, a new one per call,
  // or the newest existing one with resume.
  std::filesystem::path run_dir;
  bool resume = false;
  Exec exec = Exec::kParallel;
  std::function<void(const std::string&)> log;
};

struct StageOutcome {
  std::string name;
  bool ran = false;
};

struct RunResult {
  std::filesystem::path run_dir;
  std::vector<StageOutcome> stages;

  bool ran(const std::string& stage) const;
};

// Stages in order: clean, embed, rv, har, nlpml, explain, report. A stage is
// skipped when the manifest holds the same key (its configuration slice and
// input hashes), all its outputs are present with their recorded hashes and
// no stage it depends on ran in this invocation. Stage failures are rethrown
// with the stage name prefixed.
RunResult run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

// Panel and grid tables plus chart series from the forecasts of a run
// directory, written under <run>/report. Returns the files written.
std::vector<std::filesystem::path> emit_report(const std::filesystem::path& run_dir,
                                               const PipelineConfig& config);

// The configuration stored in a run directory.
PipelineConfig load_run_config(const std::filesystem::path& run_dir);

}  // namespace voltext::pipeline
