#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgdlab/landscape/potential.hpp"

namespace sgdlab {

struct MinimumEntry {
  Vec location;
  double loss = 0.0;
  Vec eigenvalues;     ///< ascending, all > 0
  double determinant;  ///< product of eigenvalues
};

struct SaddleEntry {
  Vec location;
  double loss = 0.0;
  Vec eigenvalues;              ///< ascending; exactly one negative
  double lambda_star = 0.0;     ///< magnitude of the negative eigenvalue
  double determinant_abs = 0.0; ///< |det Hessian|
};

struct Barrier {
  int saddle = -1;
  double height = 0.0;  ///< L(saddle) - L(from minimum)
  /// Set when another located saddle between the same pair is within 1% in height.
  bool ambiguous = false;
};

/// Minima, index-1 saddles and the barriers connecting minima.
///
/// `barriers` is keyed by (from, to) minimum ids and is populated in both
/// directions; the heights differ when the depths differ.
struct CriticalPointCatalog {
  std::vector<MinimumEntry> minima;
  std::vector<SaddleEntry> saddles;
  std::map<std::pair<int, int>, Barrier> barriers;

  const Barrier& barrier(int from, int to) const;
  bool has_barrier(int from, int to) const { return barriers.count({from, to}) > 0; }

  /// Largest positive eigenvalue across all entries.
  double max_positive_eigenvalue() const;

  /// Throws std::logic_error naming the first broken invariant: minimum
  /// eigenvalues positive, one negative eigenvalue per saddle, H >= 0,
  /// |grad L| <= gradient_tol at each stored location.
  void validate(const Potential& potential, double gradient_tol = 1e-8) const;

  nlohmann::json to_json() const;
};

/// Eigen-decomposes the Hessian at `w` and classifies the point.
/// Rejects degenerate Hessians (any |lambda| < 1e-10).
MinimumEntry make_minimum_entry(const Potential& potential, const Vec& w);
SaddleEntry make_saddle_entry(const Potential& potential, const Vec& w);

/// Newton iteration on grad L = 0 from `start`. Returns the polished point,
/// or nullopt when it fails to reach |grad L| <= tol.
std::optional<Vec> newton_polish(const Potential& potential, Vec start,
                                 double tol = 1e-11, int max_iter = 100);

}  // namespace sgdlab
