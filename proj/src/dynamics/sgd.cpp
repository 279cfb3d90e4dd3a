#include "sgdlab/dynamics/sgd.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sgdlab/core/error.hpp"
#include "sgdlab/core/hash.hpp"

namespace sgdlab {
namespace {

std::vector<double> vec_json(const Vec& v) { return {v.data(), v.data() + v.size()}; }

nlohmann::json mat_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

}  // namespace

BatchSampler::BatchSampler(std::size_t n, RandomStream& rng) : perm_(n), rng_(&rng) {
  std::iota(perm_.begin(), perm_.end(), 0u);
}

std::span<const std::uint32_t> BatchSampler::draw(std::size_t m) {
  const std::size_t n = perm_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng_->below(n - i));
    std::swap(perm_[i], perm_[j]);
  }
  return {perm_.data(), m};
}

Vec minibatch_gradient(const EmpiricalLandscape& landscape, const Vec& w, std::size_t batch_size,
                       BatchSampler& sampler) {
  if (batch_size == 0 || batch_size > landscape.size()) {
    throw std::invalid_argument("batch_size must be in [1, N]");
  }
  Vec g = Vec::Zero(landscape.dimension());
  const double scale = 1.0 / static_cast<double>(batch_size);
  for (std::uint32_t n : sampler.draw(batch_size)) landscape.add_sample_gradient(n, w, scale, g);
  return g;
}

Trajectory sgd_run(const EmpiricalLandscape& landscape, const Schedule& schedule, const Vec& w0,
                   std::size_t n_steps, std::uint64_t seed, SgdOptions options) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (w0.size() != landscape.dimension()) throw std::invalid_argument("w0 dimension mismatch");
  // gamma = 0 is allowed here: it freezes the iterate, which is a useful
  // control run. Only the batch size is validated.
  for (std::size_t k : {std::size_t{0}, n_steps - 1}) {
    const double m = schedule.batch(static_cast<double>(k));
    if (!(m >= 1.0) || m > static_cast<double>(landscape.size())) {
      throw std::invalid_argument("schedule batch size must be in [1, N]");
    }
    if (schedule.gamma(static_cast<double>(k)) < 0.0) {
      throw std::invalid_argument("schedule learning rate must be >= 0");
    }
  }

  Trajectory traj;
  traj.dimension = landscape.dimension();
  traj.schedule = schedule.to_json();
  traj.master_seed = seed;
  traj.stream_id = options.stream_id;
  traj.landscape_hash = sha256_hex(landscape.spec().dump());

  RandomStream rng(seed, options.stream_id);
  BatchSampler sampler(landscape.size(), rng);
  const Box fence = landscape.domain().scaled(2.0);
  const std::size_t stride = std::max<std::size_t>(options.stride, 1);
  Vec w = w0;
  traj.push(0.0, std::span<const double>(w.data(), w.size()));
  if (options.observer) options.observer(0, w);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k);
    const auto m = static_cast<std::size_t>(std::llround(schedule.batch(t)));
    const Vec g = minibatch_gradient(landscape, w, m, sampler);
    w -= schedule.gamma(t) * g;
    if (!fence.contains(std::span<const double>(w.data(), w.size()))) {
      throw NumericAbort("SGD iterate left twice the domain box", static_cast<std::int64_t>(k + 1));
    }
    if ((k + 1) % stride == 0 || k + 1 == n_steps) {
      traj.push(static_cast<double>(k + 1), std::span<const double>(w.data(), w.size()));
    }
    if (options.observer) options.observer(k + 1, w);
  }
  traj.steps = n_steps;
  return traj;
}

nlohmann::json NoiseStatsReport::to_json() const {
  return {{"w", vec_json(w)},
          {"batch_size", batch_size},
          {"draws", draws},
          {"mean", vec_json(mean)},
          {"covariance", mat_json(covariance)},
          {"reference_gradient", vec_json(reference_gradient)},
          {"reference_covariance", mat_json(reference_covariance)},
          {"dataset_covariance", mat_json(dataset_covariance)},
          {"mean_z", mean_z},
          {"variance_relative_error", variance_relative_error},
          {"offdiag_max_z", offdiag_max_z}};
}

NoiseStatsReport noise_stats(const EmpiricalLandscape& landscape, const Vec& w,
                             std::size_t batch_size, std::size_t n_draws, std::uint64_t seed) {
  if (n_draws < 100) throw std::invalid_argument("noise_stats needs at least 100 draws");
  const int d = landscape.dimension();
  RandomStream rng(seed, 0x901);
  BatchSampler sampler(landscape.size(), rng);

  // Welford accumulation for a stable covariance.
  Vec mean = Vec::Zero(d);
  Mat m2 = Mat::Zero(d, d);
  for (std::size_t k = 0; k < n_draws; ++k) {
    const Vec g = minibatch_gradient(landscape, w, batch_size, sampler);
    const Vec delta = g - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (g - mean).transpose();
  }
  Mat cov = m2 / static_cast<double>(n_draws - 1);
  cov = 0.5 * (cov + cov.transpose());

  NoiseStatsReport r;
  r.w = w;
  r.batch_size = batch_size;
  r.draws = n_draws;
  r.mean = mean;
  r.covariance = cov;
  r.reference_gradient = landscape.gradient(w);
  const double n = static_cast<double>(landscape.size());
  const double m = static_cast<double>(batch_size);
  const double fpc = n > 1 ? (n - m) / (n - 1) : 0.0;
  r.dataset_covariance = landscape.dataset_gradient_covariance(w) * (fpc / m);
  r.reference_covariance = landscape.kind() == RegressionKind::Linear
                               ? Mat(landscape.population_gradient_covariance(w) / m)
                               : r.dataset_covariance;

  const double draws = static_cast<double>(n_draws);
  for (int i = 0; i < d; ++i) {
    const double se = std::sqrt(cov(i, i) / draws);
    const double diff = std::abs(mean[i] - r.reference_gradient[i]);
    r.mean_z = std::max(r.mean_z, se > 0 ? diff / se : (diff > 0 ? INFINITY : 0.0));
    const double ref = r.reference_covariance(i, i);
    r.variance_relative_error =
        std::max(r.variance_relative_error, std::abs(cov(i, i) - ref) / ref);
    for (int j = i + 1; j < d; ++j) {
      const double s = std::sqrt(cov(i, i) * cov(j, j) / draws);
      if (s > 0) r.offdiag_max_z = std::max(r.offdiag_max_z, std::abs(cov(i, j)) / s);
    }
  }
  return r;
}

}  // namespace sgdlab
