#pragma once

#include <utility>
#include <vector>

#include "sgdlab/landscape/catalog.hpp"
#include "sgdlab/landscape/potential.hpp"

namespace sgdlab {

using LandscapeWithCatalog = std::pair<Landscape, CriticalPointCatalog>;

/// L(w) = c (w^2 - 1)^2 / 4 with c = 4 * barrier_height: minima at +-1,
/// saddle at 0 with L(0) = barrier_height.
LandscapeWithCatalog make_double_well(double barrier_height,
                                      NoiseModel noise = NoiseModel::constant(1.0));

/// L(w) = 1/2 sum_j curvature_j w_j^2.
LandscapeWithCatalog make_quadratic(std::vector<double> curvatures,
                                    NoiseModel noise = NoiseModel::constant(1.0));

struct WellSpec {
  Vec location;
  double depth = 0.0;
  Vec eigenvalues;
  /// Columns are the principal axes. Empty means the coordinate axes.
  Mat axes;
};

struct MultiwellOptions {
  /// Temperature of the soft-min that joins neighbouring wells. Smaller means
  /// sharper ridges and larger saddle curvature.
  double softness = 0.2;
  /// Radius of the exact quadratic core of each well; 0 picks a quarter of the
  /// smallest pairwise separation. Bumps fall to zero at twice this radius.
  double core_radius = 0.0;
  /// Quartic confinement coefficient applied beyond the outer wells.
  double tail_coefficient = 1.0;
  /// Extra margin of the domain box around the wells; 0 picks a default.
  double domain_margin = 0.0;
};

/// Locally quadratic wells blended into a soft-min background.
///
/// Inside each core L(w) equals depth + 1/2 (w-c)^T H (w-c) exactly. Between
/// cores a compactly supported C2 bump hands over to the soft-min of all
/// well quadratics, and a quartic tail confines the far field. Saddles are
/// located between every pair of minima (1D: grid argmax on the segment;
/// 2D: string method) and polished by Newton.
///
/// Throws std::invalid_argument when wells overlap (separation < 4 * core
/// radius) or a requested Hessian is not positive definite.
LandscapeWithCatalog make_multiwell(const std::vector<WellSpec>& wells,
                                    MultiwellOptions options = {},
                                    NoiseModel noise = NoiseModel::constant(1.0));

/// L(w) = curvature/2 |w|^2 + |w|^(2k)/(2k) in one dimension: a flat-bottomed
/// single well whose relaxation rate scales almost like 1/eta.
LandscapeWithCatalog make_power_well(double curvature, int half_exponent,
                                     NoiseModel noise = NoiseModel::constant(1.0));

/// L(w) = slope * w, unconfined. Test fixture with an empty catalog.
Landscape make_linear_fixture(double slope);

/// Rebuilds a landscape from its serialized spec.
LandscapeWithCatalog build_landscape(const LandscapeSpec& spec);

nlohmann::json noise_to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const nlohmann::json& j);

}  // namespace sgdlab
