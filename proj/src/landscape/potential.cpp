#include "sgdlab/landscape/potential.hpp"

#include <stdexcept>

#include "sgdlab/core/hash.hpp"

namespace sgdlab {

bool Box::contains(std::span<const double> w, double margin) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (w[i] < lo[k] + margin || w[i] > hi[k] - margin) return false;
  }
  return true;
}

Box Box::scaled(double factor) const {
  const Vec c = 0.5 * (lo + hi);
  const Vec half = 0.5 * (hi - lo) * factor;
  return {c - half, c + half};
}

Vec Potential::gradient(const Vec& w) const {
  Vec g(dimension());
  gradient(std::span<const double>(w.data(), w.size()), std::span<double>(g.data(), g.size()));
  return g;
}

Mat Potential::hessian(const Vec& w) const {
  const int d = dimension();
  std::vector<double> buf(static_cast<std::size_t>(d * d));
  hessian(std::span<const double>(w.data(), w.size()), buf);
  Mat h(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) h(i, j) = buf[static_cast<std::size_t>(i * d + j)];
  return h;
}

void NoiseModel::beta_gradient(std::span<const double> w, std::span<double> out) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double c = center.size() ? center[static_cast<Eigen::Index>(i)] : 0.0;
    out[i] = 2.0 * scale * (w[i] - c);
  }
}

std::string LandscapeSpec::hash() const { return sha256_hex(data.dump()); }

Landscape::Landscape(std::shared_ptr<const Potential> potential, NoiseModel noise,
                     LandscapeSpec spec, double stiffness)
    : potential_(std::move(potential)),
      noise_(std::move(noise)),
      spec_(std::move(spec)),
      stiffness_(stiffness) {
  if (!potential_) throw std::invalid_argument("landscape needs a potential");
  if (noise_.base <= 0.0 || noise_.scale < 0.0) {
    throw std::invalid_argument("noise model must keep beta(w) > 0");
  }
  if (noise_.center.size() != 0 && noise_.center.size() != potential_->dimension()) {
    throw std::invalid_argument("noise center dimension mismatch");
  }
}

Landscape Landscape::with_noise(NoiseModel noise) const {
  LandscapeSpec spec = spec_;
  nlohmann::json n = {{"base", noise.base}, {"scale", noise.scale}};
  if (noise.center.size()) {
    n["center"] = std::vector<double>(noise.center.data(), noise.center.data() + noise.center.size());
  }
  spec.data["noise"] = n;
  return Landscape(potential_, std::move(noise), std::move(spec), stiffness_);
}

}  // namespace sgdlab
