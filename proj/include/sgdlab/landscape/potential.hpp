#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sgdlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Axis-aligned box [lo, hi] in parameter space.
struct Box {
  Vec lo;
  Vec hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> w, double margin = 0.0) const;
  /// Box scaled about its center by `factor`.
  Box scaled(double factor) const;
};

/// A twice-differentiable loss surface with analytic derivatives.
///
/// Implementations are immutable and may be shared across threads. The span
/// overloads write into caller storage so inner simulation loops never
/// allocate; the Eigen overloads are conveniences.
class Potential {
 public:
  virtual ~Potential() = default;

  virtual int dimension() const = 0;
  virtual double value(std::span<const double> w) const = 0;
  virtual void gradient(std::span<const double> w, std::span<double> out) const = 0;
  /// Row-major d*d output.
  virtual void hessian(std::span<const double> w, std::span<double> out) const = 0;
  virtual const Box& domain() const = 0;

  double value(const Vec& w) const { return value(std::span<const double>(w.data(), w.size())); }
  Vec gradient(const Vec& w) const;
  Mat hessian(const Vec& w) const;
};

/// Noise amplitude beta(w) of the isotropic gradient covariance
/// sigma^2(w) = beta(w) I, modelled as base + scale * |w - center|^2.
struct NoiseModel {
  double base = 1.0;
  double scale = 0.0;
  Vec center;  ///< empty means the origin

  static NoiseModel constant(double beta) { return {beta, 0.0, {}}; }

  bool is_constant() const { return scale == 0.0; }
  double beta(std::span<const double> w) const {
    if (scale == 0.0) return base;
    double r2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double c = center.size() ? center[static_cast<Eigen::Index>(i)] : 0.0;
      r2 += (w[i] - c) * (w[i] - c);
    }
    return base + scale * r2;
  }
  void beta_gradient(std::span<const double> w, std::span<double> out) const;
};

/// Serializable description of a landscape, the unit of experiment configs.
struct LandscapeSpec {
  nlohmann::json data;  ///< canonical {"kind": ..., params..., "noise": {...}}

  std::string kind() const { return data.at("kind").get<std::string>(); }
  /// Hex digest of the canonical JSON dump.
  std::string hash() const;
};

/// An analytic landscape: potential, noise amplitude and provenance.
class Landscape {
 public:
  Landscape(std::shared_ptr<const Potential> potential, NoiseModel noise,
            LandscapeSpec spec, double stiffness);

  int dimension() const { return potential_->dimension(); }
  const Potential& potential() const { return *potential_; }
  std::shared_ptr<const Potential> potential_ptr() const { return potential_; }
  const NoiseModel& noise() const { return noise_; }
  const LandscapeSpec& spec() const { return spec_; }
  const Box& domain() const { return potential_->domain(); }

  double value(const Vec& w) const { return potential_->value(w); }
  Vec gradient(const Vec& w) const { return potential_->gradient(w); }
  Mat hessian(const Vec& w) const { return potential_->hessian(w); }
  double beta(const Vec& w) const {
    return noise_.beta(std::span<const double>(w.data(), w.size()));
  }

  /// Largest positive Hessian eigenvalue over the catalog; drives the SDE
  /// step-size rule dt <= 0.1 / stiffness.
  double stiffness() const { return stiffness_; }

  /// Same potential with a different noise model.
  Landscape with_noise(NoiseModel noise) const;

 private:
  std::shared_ptr<const Potential> potential_;
  NoiseModel noise_;
  LandscapeSpec spec_;
  double stiffness_;
};

}  // namespace sgdlab
