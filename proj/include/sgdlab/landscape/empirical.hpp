#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sgdlab/landscape/potential.hpp"

namespace sgdlab {

enum class RegressionKind { Linear, Logistic };

std::string to_string(RegressionKind kind);
RegressionKind regression_kind_from_string(const std::string& name);

/// Finite-sum loss L(w) = (1/N) sum_n L_n(w) over a synthetic dataset.
///
/// Linear:   L_n = (x_n.w - y_n)^2 / 2 + l2 |w|^2, y_n = x_n.w0 + noise.
/// Logistic: L_n = log(1 + e^{z}) - y_n z + l2 |w|^2, z = x_n.w,
///           y_n ~ Bernoulli(sigmoid(x_n.w0)).
/// Covariates are standard normal, noise is unit variance.
///
/// The gradient covariance of these losses is not isotropic in general, so
/// this type is deliberately separate from Landscape.
class EmpiricalLandscape {
 public:
  static EmpiricalLandscape make(RegressionKind kind, std::size_t n_samples,
                                 const Vec& true_weights, double l2_penalty,
                                 std::uint64_t seed);

  RegressionKind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(x_.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(x_.rows()); }
  double l2_penalty() const { return l2_; }
  const Vec& true_weights() const { return w0_; }
  const Box& domain() const { return box_; }
  const Mat& covariates() const { return x_; }
  const Vec& targets() const { return y_; }

  /// Problems with the standing assumptions, e.g. unregularized logistic
  /// loss is not confining. Empty when none.
  const std::vector<std::string>& warnings() const { return warnings_; }

  double sample_loss(std::size_t n, const Vec& w) const;
  /// Adds scale * grad L_n(w) into `acc`.
  void add_sample_gradient(std::size_t n, const Vec& w, double scale, Vec& acc) const;
  Vec sample_gradient(std::size_t n, const Vec& w) const;

  double loss(const Vec& w) const;
  Vec gradient(const Vec& w) const;
  Mat hessian(const Vec& w) const;

  /// Covariance of a single uniformly drawn per-sample gradient over the dataset.
  Mat dataset_gradient_covariance(const Vec& w) const;

  /// Population covariance of the per-sample gradient for the linear family,
  /// (|w - w0|^2 + 1) I + (w - w0)(w - w0)^T. Throws for logistic.
  Mat population_gradient_covariance(const Vec& w) const;

  /// Full-data loss as a Potential (for derivative checks and assumption reports).
  std::shared_ptr<const Potential> as_potential() const;

  /// Canonical description for provenance.
  nlohmann::json spec() const;

 private:
  RegressionKind kind_ = RegressionKind::Linear;
  Mat x_;
  Vec y_;
  Vec w0_;
  double l2_ = 0.0;
  std::uint64_t seed_ = 0;
  Box box_;
  std::vector<std::string> warnings_;
};

}  // namespace sgdlab
