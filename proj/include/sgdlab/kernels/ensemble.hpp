#pragma once

#include <cstdint>
#include <vector>

#include "sgdlab/landscape/potential.hpp"

namespace sgdlab::kernels {

/// Worker count: `requested` if positive, else SGDLAB_WORKERS, else the
/// OpenMP default.
int resolve_workers(int requested = 0);

/// Trajectories started at `start`, stopped on first entry into the
/// radius-ball around `target` or at t_max (censored). Stream id = index.
struct FirstPassageProblem {
  const Landscape* landscape = nullptr;
  Vec start;
  Vec target;
  double radius = 0.0;
  double ratio = 0.0;  ///< gamma / M
  double dt = 0.0;
  double t_max = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t first_stream = 0;
};

struct FirstPassageSamples {
  std::vector<double> times;       ///< hitting time, or t_max when censored
  std::vector<std::uint8_t> censored;
};

FirstPassageSamples first_passage_serial(const FirstPassageProblem& problem, std::size_t count);
FirstPassageSamples first_passage_parallel(const FirstPassageProblem& problem, std::size_t count,
                                           int workers = 0);

/// Independent long runs that accumulate the time spent inside each
/// radius-ball after burn-in.
struct OccupationProblem {
  const Landscape* landscape = nullptr;
  Vec start;
  std::vector<Vec> centers;
  double radius = 0.0;
  double ratio = 0.0;
  double dt = 0.0;
  double t_burn = 0.0;
  double t_total = 0.0;
  std::uint64_t seed = 0;
};

struct OccupationSamples {
  /// occupancy[s][k]: time stream s spent in ball k after burn-in.
  std::vector<std::vector<double>> occupancy;
  /// Moves between different balls per stream (visits separated by time
  /// outside every ball count once).
  std::vector<std::int64_t> switches;
};

OccupationSamples occupation_serial(const OccupationProblem& problem, std::size_t streams);
OccupationSamples occupation_parallel(const OccupationProblem& problem, std::size_t streams,
                                      int workers = 0);

}  // namespace sgdlab::kernels
