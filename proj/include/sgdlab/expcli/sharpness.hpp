#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

namespace sgdlab {

struct SharpnessPair {
  double gamma = 0.0;
  std::size_t batch = 1;
};

/// Logistic regression on synthetic data, trained by SGD for each
/// (gamma, M) pair and seed; the exact Hessian Frobenius norm and the
/// training loss are recorded at every epoch (N / M steps).
struct SharpnessToyConfig {
  int dimension = 20;
  std::size_t samples = 4096;
  double l2 = 0.01;
  double init_scale = 0.1;
  double weight_scale = 3.0;
  int epochs = 60;
  std::vector<SharpnessPair> pairs = {{0.01, 128}, {0.1, 128}, {0.2, 256}};
  int seeds = 10;
  std::uint64_t master_seed = 0;
  std::uint64_t data_seed = 0;
  int workers = 0;
};

struct SharpnessCurve {
  std::size_t pair = 0;
  std::uint64_t seed = 0;
  std::vector<double> frobenius;  ///< index = epoch, 0 is the initial point
  std::vector<double> loss;
};

struct SharpnessToyResult {
  SharpnessToyConfig config;
  std::vector<std::uint64_t> seeds;
  /// Pair-major: curves[pair * seeds + s].
  std::vector<SharpnessCurve> curves;

  const SharpnessCurve& curve(std::size_t pair, std::size_t seed_index) const;
  /// gamma,batch,seed,epoch,hessian_frobenius,train_loss
  void write_csv(std::ostream& out) const;
};

SharpnessToyResult sharpness_toy(const SharpnessToyConfig& config);

/// Per-epoch |mean_a - mean_b| against the larger of the two across-seed
/// ranges (max - min).
struct CurveOverlap {
  bool within_spread = true;
  std::vector<double> gap;
  std::vector<double> spread;
};
CurveOverlap curve_overlap(const SharpnessToyResult& result, std::size_t pair_a, std::size_t pair_b);

/// One-sided Mann-Whitney p-value that the norm of `slow` at `epoch`
/// exceeds that of `fast` across seeds.
double slower_decrease_p(const SharpnessToyResult& result, std::size_t slow, std::size_t fast,
                         int epoch);

nlohmann::json sharpness_summary(const SharpnessToyResult& result, int rank_epoch);

}  // namespace sgdlab
