#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgdlab/expcli/config.hpp"

namespace sgdlab {

struct RunOptions {
  /// Replaces the config's output_dir when set.
  std::optional<std::filesystem::path> output_dir;
  /// 0 defers to SGDLAB_WORKERS / OpenMP.
  int workers = 0;
};

/// Runs the experiment in a fresh directory `<output_dir>/<kind>-<utc>-<hash8>`
/// holding config.resolved.json, the outputs and manifest.json. On failure the
/// manifest is written with status "failed" and the exception is rethrown.
std::filesystem::path run_experiment(const ExperimentConfig& config, RunOptions options = {});

/// Manifest contents plus a checksum verification of every listed file.
nlohmann::json report_run(const std::filesystem::path& run_dir);

}  // namespace sgdlab
