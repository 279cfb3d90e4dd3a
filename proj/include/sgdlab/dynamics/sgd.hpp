#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgdlab/core/rng.hpp"
#include "sgdlab/dynamics/schedule.hpp"
#include "sgdlab/dynamics/trajectory.hpp"
#include "sgdlab/landscape/empirical.hpp"

namespace sgdlab {

/// Draws batches of distinct indices from [0, N).
///
/// Keeps a persistent permutation and runs a partial Fisher-Yates shuffle of
/// its first M slots per batch: each batch is a uniform M-subset, batches are
/// independent, and the cost is O(M).
class BatchSampler {
 public:
  BatchSampler(std::size_t n, RandomStream& rng);
  std::span<const std::uint32_t> draw(std::size_t m);

 private:
  std::vector<std::uint32_t> perm_;
  RandomStream* rng_;
};

/// (1/M) sum over a fresh batch of the per-sample gradients.
/// Throws std::invalid_argument when batch_size is 0 or exceeds N.
Vec minibatch_gradient(const EmpiricalLandscape& landscape, const Vec& w, std::size_t batch_size,
                       BatchSampler& sampler);

struct SgdOptions {
  std::size_t stride = 100;
  std::uint64_t stream_id = 0;
  /// Called with (step, w) before step 0 and after every step.
  std::function<void(std::size_t, const Vec&)> observer;
};

/// w_{k+1} = w_k - gamma_k / M_k * sum_{n in B_k} grad L_n(w_k), with the
/// schedule evaluated at the step index k. Throws NumericAbort when the
/// iterate leaves twice the domain box.
Trajectory sgd_run(const EmpiricalLandscape& landscape, const Schedule& schedule, const Vec& w0,
                   std::size_t n_steps, std::uint64_t seed, SgdOptions options = {});

struct NoiseStatsReport {
  Vec w;
  std::size_t batch_size = 0;
  std::size_t draws = 0;
  Vec mean;
  Mat covariance;
  Vec reference_gradient;
  /// sigma^2(w) / M: population closed form for linear loss, dataset
  /// covariance otherwise.
  Mat reference_covariance;
  /// Exact covariance of the batch mean under sampling without replacement
  /// from this dataset.
  Mat dataset_covariance;
  /// max_i |mean_i - ref_i| / (sd_i / sqrt(draws)).
  double mean_z = 0.0;
  /// max_i |cov_ii - ref_ii| / ref_ii.
  double variance_relative_error = 0.0;
  /// max_{i<j} |cov_ij| / sqrt(cov_ii cov_jj / draws).
  double offdiag_max_z = 0.0;

  nlohmann::json to_json() const;
};

NoiseStatsReport noise_stats(const EmpiricalLandscape& landscape, const Vec& w,
                             std::size_t batch_size, std::size_t n_draws, std::uint64_t seed);

}  // namespace sgdlab
