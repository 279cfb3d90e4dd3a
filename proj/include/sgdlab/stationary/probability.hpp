#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "sgdlab/fokker_planck/grid.hpp"
#include "sgdlab/landscape/catalog.hpp"

namespace sgdlab {

/// Factors of the closed-form probability; their product is `closed_form`.
struct ProbabilityComponents {
  double kappa = 0.0;
  double exp_factor = 0.0;          ///< e^{-eta L(w)}
  double determinant_factor = 0.0;  ///< eta^{-d/2} / sqrt(|det Hess L(w)|)
  double product_term = 0.0;        ///< prod_j sqrt(1 - e^{-eps^2 eta lambda_j / pi})
  double eps_factor = 0.0;          ///< e^{eta eps^2}
  /// pi^{d/2} times the unit-ball volume: makes the expression agree with
  /// the ball integral as eps -> 0 (2 sqrt(pi) in 1D, pi^2 in 2D).
  double normalization = 0.0;
};

struct MinimizerProbability {
  int minimum = 0;
  double epsilon = 0.0;
  double eta = 0.0;
  double closed_form = 0.0;
  /// The same expression without the normalization constant and with
  /// e^{-2 eta L} in place of e^{-eta L}.
  double closed_form_literal = 0.0;
  /// Normalized expression with e^{-2 eta L}.
  double closed_form_double_exponent = 0.0;
  double quadrature = 0.0;
  /// |fine - coarse| of the halved-grid check.
  double quadrature_error = 0.0;
  double relative_gap = 0.0;  ///< |closed - quadrature| / quadrature
  ProbabilityComponents components;
  /// "single-exponent", "double-exponent" or "indistinguishable".
  std::string matching_convention;
  /// e^{eta eps^2} can push the closed form above 1 for large eta eps^2.
  bool closed_form_exceeds_one = false;

  nlohmann::json to_json() const;
};

/// Normalizer of e^{-eta L} by midpoint quadrature on a grid covering the
/// catalog, with the stationary tail-mass check.
struct GibbsNormalizer {
  GridSpec grid;
  double kappa = 0.0;
  double log_kappa = 0.0;
  double tail_fraction = 0.0;
};

/// cells = 0 picks 4001 in 1D and 512 per axis in 2D.
GibbsNormalizer gibbs_normalizer(const Landscape& landscape, const CriticalPointCatalog& catalog,
                                 double eta, int cells = 0, double margin_sigmas = 8.0);

/// Closed form and ball-quadrature probability that the stationary iterate
/// lies within eps of minimum `id`. Throws std::invalid_argument when the
/// ball leaves the normalizer grid.
MinimizerProbability minimizer_probability(const Landscape& landscape,
                                           const CriticalPointCatalog& catalog, int id,
                                           double eta, double epsilon,
                                           const GibbsNormalizer& normalizer);
MinimizerProbability minimizer_probability(const Landscape& landscape,
                                           const CriticalPointCatalog& catalog, int id,
                                           double eta, double epsilon);

struct ProbabilityRatio {
  double value = 0.0;
  /// "equal-depth" (sqrt(det2 / det1)) or "general" (finite-eps closed-form ratio).
  std::string label;
};

ProbabilityRatio probability_ratio(const CriticalPointCatalog& catalog, int id1, int id2,
                                   double eta, double epsilon);

/// Ball integral of kappa e^{-eta L} around `center` by midpoint rule
/// (polar in 2D) at two resolutions; `value` is the Richardson extrapolation
/// of the pair.
struct BallQuadrature {
  double value = 0.0;
  double fine = 0.0;
  double coarse = 0.0;
};
BallQuadrature ball_quadrature(const Landscape& landscape, const Vec& center, double epsilon,
                               double eta, double log_kappa);

}  // namespace sgdlab
