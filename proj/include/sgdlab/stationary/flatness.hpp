#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace sgdlab {

/// Probability curves of the flat-versus-sharp example suites.
///
/// Example 1: three equal-depth 1D wells with curvatures 4.5, 12.5, 28.125
/// at beta = 1. Example 2: a quadratic of curvature 4.5 under noise levels
/// beta in {5, 10, 50, 100}. Example 3: three equal-depth 2D wells with
/// Hessian eigenvalue pairs (15, 20), (14.22, 42.66), (102.13, 25.53), plus
/// a two-well pair (2.42, 0.022) vs (2.22, 0.222). In all cases
/// eta = 2 (M / gamma) / beta.
struct AppendixHTable {
  int example = 0;
  double epsilon = 0.1;
  std::vector<double> m_over_gamma;
  std::vector<std::string> series;
  /// [series][grid point]
  std::vector<std::vector<double>> eta;
  std::vector<std::vector<double>> closed_form;
  std::vector<std::vector<double>> quadrature;
  /// Pairs of series indices whose difference curves are emitted.
  std::vector<std::pair<int, int>> differences;
  /// Named automatic assertions.
  std::vector<std::pair<std::string, bool>> checks;

  bool all_checks_pass() const;
  /// m_over_gamma, series, eta, closed_form, quadrature
  void write_probabilities_csv(std::ostream& out) const;
  /// m_over_gamma, pair, closed_form_difference, quadrature_difference
  void write_differences_csv(std::ostream& out) const;
  nlohmann::json manifest() const;
};

std::vector<double> default_m_over_gamma(int example);

/// Throws std::invalid_argument for an unknown id or a non-positive grid value.
AppendixHTable appendix_h_example(int example, std::vector<double> m_over_gamma,
                                  double epsilon = 0.1);

}  // namespace sgdlab
