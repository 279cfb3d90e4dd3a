#include "sgdlab/metastability/kramers.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgdlab {

KramersPrediction kramers_time(const CriticalPointCatalog& catalog, int from, int to, double gamma,
                               double batch, double beta) {
  if (!(gamma > 0.0) || !(batch > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("kramers_time needs gamma, M, beta > 0");
  }
  const Barrier& b = catalog.barrier(from, to);
  const auto& saddle = catalog.saddles.at(static_cast<std::size_t>(b.saddle));
  const auto& minimum = catalog.minima.at(static_cast<std::size_t>(from));
  if (!(saddle.lambda_star > 0.0) || !(saddle.determinant_abs > 0.0) || !(minimum.determinant > 0.0)) {
    throw std::invalid_argument("kramers_time: degenerate Hessian in catalog");
  }
  KramersPrediction k;
  // Through the ratio so that (c gamma, c M) gives the same bits whenever
  // c gamma / (c M) rounds to gamma / M (always for powers of two).
  const double ratio = gamma / batch;
  k.eta = 2.0 / (ratio * beta);
  k.barrier = b.height;
  k.exponent = b.height * k.eta;
  k.prefactor = 2.0 * std::numbers::pi / saddle.lambda_star *
                std::sqrt(saddle.determinant_abs / minimum.determinant);
  k.time = k.prefactor * std::exp(k.exponent);
  return k;
}

}  // namespace sgdlab
