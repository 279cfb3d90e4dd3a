#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "sgdlab/fokker_planck/grid.hpp"

namespace sgdlab {

struct WeightedDistance {
  double value = 0.0;
  /// Cells where p_inf was below 1e-300 and was floored.
  std::size_t floored_cells = 0;
};

/// sum over cells of (p - p_inf)^2 / p_inf * cell volume.
/// Throws std::invalid_argument when the grids differ.
WeightedDistance weighted_l2_distance(const DensityField& p, const DensityField& p_inf);

struct DecayFit {
  double rate = 0.0;  ///< minus the slope of log(distance) against t
  double r2 = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least squares of log(distance) on t over t_lo <= t <= t_hi. Needs at
/// least 10 points in the window; throws std::domain_error on a
/// nonpositive distance inside it.
DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> distances,
                        double t_lo, double t_hi);

/// CSV with header t,distance.
void write_distance_csv(std::ostream& out, std::span<const double> times,
                        std::span<const double> distances);

}  // namespace sgdlab
