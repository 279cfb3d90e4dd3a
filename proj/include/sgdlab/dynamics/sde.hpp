#pragma once

#include <cstdint>
#include <vector>

#include "sgdlab/core/rng.hpp"
#include "sgdlab/dynamics/schedule.hpp"
#include "sgdlab/dynamics/trajectory.hpp"
#include "sgdlab/landscape/potential.hpp"

namespace sgdlab {

/// One Euler-Maruyama step of dW = -grad L dt + sqrt(gamma beta(W) / M) dB,
/// with caller-owned scratch so the hot loop never allocates.
class EulerMaruyama {
 public:
  explicit EulerMaruyama(const Landscape& landscape);

  /// Advances w in place; `ratio` is gamma/M at the current time.
  void step(std::span<double> w, double ratio, double dt, RandomStream& rng) {
    potential_->gradient(w, grad_);
    const double beta = constant_beta_ ? beta_ : noise_->beta(w);
    const double amp = std::sqrt(ratio * beta * dt);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += -grad_[i] * dt + amp * rng.normal();
  }

 private:
  const Potential* potential_;
  const NoiseModel* noise_;
  bool constant_beta_;
  double beta_;
  std::vector<double> grad_;
};

/// Largest dt allowed by the rule dt <= 0.1 / stiffness; +inf for a flat landscape.
double max_stable_dt(const Landscape& landscape);

struct SdeOptions {
  /// Record every `stride` steps (the first and last states are always kept).
  std::size_t stride = 100;
  std::uint64_t stream_id = 0;
  /// Reject dt above max_stable_dt.
  bool enforce_dt_rule = true;
};

/// Euler-Maruyama path from w0 over [0, t_end]. Throws std::invalid_argument
/// on a bad dt, NumericAbort when the iterate leaves twice the domain box.
Trajectory sde_run(const Landscape& landscape, const Schedule& schedule, const Vec& w0,
                   double t_end, double dt, std::uint64_t seed, SdeOptions options = {});

}  // namespace sgdlab
