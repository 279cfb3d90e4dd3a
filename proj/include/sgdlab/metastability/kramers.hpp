#pragma once

#include "sgdlab/landscape/catalog.hpp"

namespace sgdlab {

struct KramersPrediction {
  double time = 0.0;      ///< expected escape time
  double exponent = 0.0;  ///< H * eta with eta = 2M / (gamma beta)
  double prefactor = 0.0; ///< (2 pi / lambda*) sqrt(|det saddle| / |det minimum|)
  double eta = 0.0;
  double barrier = 0.0;
};

/// Eyring-Kramers expected transition time from minimum `from` to `to`.
/// Depends on gamma and M only through gamma / M. Throws std::out_of_range
/// when the catalog has no barrier (from, to), std::invalid_argument for
/// non-positive gamma, M, beta.
KramersPrediction kramers_time(const CriticalPointCatalog& catalog, int from, int to, double gamma,
                               double batch, double beta);

}  // namespace sgdlab
