#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgdlab/landscape/empirical.hpp"

namespace sgdlab {

enum class ExperimentKind {
  SimulateSde,
  SimulateSgd,
  FokkerPlanck,
  EscapeTime,
  EscapeSweep,
  StationaryProb,
  OccupationRatio,
  AppendixH,
  VerifyNoise,
  CheckAssumptions,
  SharpnessToy,
};

std::string to_string(ExperimentKind kind);
/// Throws std::invalid_argument for an unknown name.
ExperimentKind experiment_kind_from_string(const std::string& name);

/// A validated experiment description with every default filled in.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SimulateSde;
  nlohmann::json landscape;  ///< null when the kind needs none
  nlohmann::json schedule;   ///< null when the kind needs none
  nlohmann::json params;     ///< object
  std::uint64_t seed = 0;
  std::string output_dir = "runs";

  /// Canonical JSON form; round-trips through config_from_json.
  nlohmann::json resolved() const;
  /// SHA-256 of resolved().dump().
  std::string hash() const;
};

/// Parses YAML (or JSON, which is accepted as-is) into a JSON document.
nlohmann::json parse_config_text(const std::string& text);

/// Validates and fills defaults. Throws ValidationError listing every
/// offending field (e.g. "schedule.gamma", "params.dt", "seed").
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Landscape section {"kind": "empirical", "regression", "samples",
/// "dimension", "l2", "weight_scale" | "true_weights", "data_seed"}.
/// Missing true weights are drawn as N(0, I) * weight_scale / sqrt(d)
/// from data_seed.
EmpiricalLandscape build_empirical(const nlohmann::json& spec);

}  // namespace sgdlab
