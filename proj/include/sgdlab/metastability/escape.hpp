#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgdlab/core/stats.hpp"
#include "sgdlab/dynamics/schedule.hpp"
#include "sgdlab/landscape/catalog.hpp"
#include "sgdlab/metastability/kramers.hpp"

namespace sgdlab {

struct EscapeSpec {
  int from = 0;
  int to = 1;
  /// Arrival radius around the target minimum; 0 means 0.1 |w_to - w*|.
  double radius = 0.0;
  /// Simulation cap per trajectory; 0 means 10x the Kramers prediction.
  double t_max = 0.0;
  std::size_t trajectories = 1000;
  int workers = 0;
  /// Use the serial reference kernel.
  bool serial = false;
};

struct EscapeReport {
  KramersPrediction kramers;
  double gamma = 0.0, batch = 0.0, beta = 0.0;
  double radius = 0.0, t_max = 0.0, dt = 0.0;
  std::size_t trajectories = 0;
  std::size_t censored = 0;
  /// Mean over uncensored samples; a lower bound when censoring exceeds 5%.
  double mc_mean = 0.0;
  stats::Interval ci{};
  double ratio = 0.0;  ///< mc_mean / Kramers
  bool lower_bound = false;
  bool has_estimate = false;
  std::vector<double> samples;
  std::vector<std::uint8_t> censored_flags;
  std::vector<std::string> notes;

  /// Uncensored samples only.
  std::vector<double> hitting_times() const;
  nlohmann::json to_json() const;
  /// CSV trajectory,tau,censored.
  void write_samples_csv(std::ostream& out) const;
};

/// Monte Carlo first-passage times from minimum `from` into the arrival ball
/// of `to`, compared against the Eyring-Kramers prediction. The schedule
/// must be constant; beta is taken at the starting minimum.
EscapeReport mc_escape_time(const Landscape& landscape, const CriticalPointCatalog& catalog,
                            const EscapeSpec& spec, const Schedule& schedule, double dt,
                            std::uint64_t seed);

struct SweepRow {
  double eta = 0.0;
  double gamma = 0.0;
  EscapeReport report;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  double barrier = 0.0;
  /// Slope of log(MC mean) against eta and its standard error; NaN when
  /// fewer than two rows carry estimates.
  double slope = 0.0;
  double slope_stderr = 0.0;

  nlohmann::json to_json() const;
  /// CSV eta,gamma,kramers,mc_mean,ci_lo,ci_hi,ratio,censored,trajectories.
  void write_csv(std::ostream& out) const;
};

/// mc_escape_time over eta values with M = 1 and gamma = 2 / (eta beta).
/// Each eta uses its own seed derived from `seed`.
SweepTable escape_sweep(const Landscape& landscape, const CriticalPointCatalog& catalog,
                        const EscapeSpec& spec, const std::vector<double>& eta_values, double dt,
                        std::uint64_t seed);

}  // namespace sgdlab
