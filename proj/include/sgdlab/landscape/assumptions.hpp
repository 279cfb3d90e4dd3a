#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgdlab/landscape/potential.hpp"

namespace sgdlab {

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

/// Per-shell summaries over the sampled directions.
struct ShellSummary {
  double radius = 0.0;
  double min_loss = 0.0;
  double max_loss = 0.0;
  /// min over directions of |grad L|^2 / 2 - tr Hess L
  double a2_growth = 0.0;
  /// max over directions of |tr Hess L| / |grad L|^2
  double a2_ratio = 0.0;
  /// max over directions of |e^{-L} (|grad L|^2 - tr Hess L)|
  double a3_value = 0.0;
  int non_finite = 0;
};

/// Numeric surrogates for the confinement, growth and boundedness assumptions
/// of the stationary theory. Verdicts come from finitely many shells and grid
/// points, so they are heuristics and never proofs.
struct AssumptionReport {
  std::vector<ShellSummary> shells;
  Verdict confinement = Verdict::Inconclusive;
  Verdict growth = Verdict::Inconclusive;
  Verdict boundedness = Verdict::Inconclusive;
  double a3_sup = 0.0;
  std::vector<std::string> notes;

  bool confinement_ok() const { return confinement == Verdict::Pass; }
  nlohmann::json to_json() const;
};

struct AssumptionOptions {
  /// Directions per shell (2 in 1D, evenly spaced angles in 2D, seeded
  /// random unit vectors above).
  int directions = 64;
  /// Shells and grid are centered here; empty means the origin.
  Vec center;
  std::uint64_t seed = 0;
};

/// Samples the assumptions on expanding shells and on a tensor grid over
/// the domain (random points in dimension > 3).
AssumptionReport check_assumptions(const Potential& potential, const std::vector<double>& shells,
                                   int grid_resolution, AssumptionOptions options = {});

}  // namespace sgdlab
