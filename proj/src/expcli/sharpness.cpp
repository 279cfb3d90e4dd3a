#include "sgdlab/expcli/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

#include "sgdlab/core/csv.hpp"
#include "sgdlab/core/error.hpp"
#include "sgdlab/core/rng.hpp"
#include "sgdlab/core/stats.hpp"
#include "sgdlab/dynamics/sgd.hpp"
#include "sgdlab/kernels/ensemble.hpp"

namespace sgdlab {

const SharpnessCurve& SharpnessToyResult::curve(std::size_t pair, std::size_t seed_index) const {
  return curves.at(pair * seeds.size() + seed_index);
}

void SharpnessToyResult::write_csv(std::ostream& out) const {
  csv::Writer w(out, {"gamma", "batch", "seed", "epoch", "hessian_frobenius", "train_loss"});
  for (const auto& c : curves) {
    const auto& p = config.pairs[c.pair];
    for (std::size_t e = 0; e < c.frobenius.size(); ++e) {
      w.field(p.gamma).field(p.batch).field(std::to_string(c.seed)).field(e)
          .field(c.frobenius[e]).field(c.loss[e]).end_row();
    }
  }
}

SharpnessToyResult sharpness_toy(const SharpnessToyConfig& config) {
  if (config.seeds < 2) throw std::invalid_argument("sharpness toy needs at least 2 seeds");
  if (config.epochs < 1 || config.dimension < 1) throw std::invalid_argument("bad toy size");
  for (const auto& p : config.pairs) {
    if (p.gamma < 0.0 || p.batch < 1 || p.batch > config.samples) {
      throw std::invalid_argument("pair needs gamma >= 0 and 1 <= M <= N");
    }
  }
  Vec w_true(config.dimension);
  RandomStream data_rng(config.data_seed, 0x7E);
  for (auto& v : w_true) v = data_rng.normal() * config.weight_scale / std::sqrt(config.dimension);
  const auto land = EmpiricalLandscape::make(RegressionKind::Logistic, config.samples, w_true,
                                             config.l2, config.data_seed);

  SharpnessToyResult r;
  r.config = config;
  for (int s = 0; s < config.seeds; ++s) {
    r.seeds.push_back(RandomStream::derive_key(config.master_seed, static_cast<std::uint64_t>(s)));
  }
  const std::size_t n_cells = config.pairs.size() * r.seeds.size();
  r.curves.resize(n_cells);

  const int workers = kernels::resolve_workers(config.workers);
  bool aborted = false;
  std::string abort_message;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    const std::size_t pair = cell / r.seeds.size();
    const std::uint64_t seed = r.seeds[cell % r.seeds.size()];
    const auto& p = config.pairs[pair];
    SharpnessCurve c;
    c.pair = pair;
    c.seed = seed;
    RandomStream init_rng(seed, 0x1417);
    Vec w0(config.dimension);
    for (auto& v : w0) v = init_rng.normal() * config.init_scale;
    const std::size_t per_epoch = std::max<std::size_t>(config.samples / p.batch, 1);
    SgdOptions opt;
    opt.stride = per_epoch;
    opt.stream_id = pair + 1;
    opt.observer = [&](std::size_t step, const Vec& w) {
      if (step % per_epoch == 0) {
        c.frobenius.push_back(land.hessian(w).norm());
        c.loss.push_back(land.loss(w));
      }
    };
    try {
      sgd_run(land, Schedule::constant(p.gamma, static_cast<double>(p.batch)), w0,
              per_epoch * static_cast<std::size_t>(config.epochs), seed, opt);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        aborted = true;
        abort_message = e.what();
      }
    }
    r.curves[cell] = std::move(c);
  }
  if (aborted) throw NumericAbort("sharpness toy: " + abort_message, 0);
  return r;
}

CurveOverlap curve_overlap(const SharpnessToyResult& result, std::size_t pair_a, std::size_t pair_b) {
  CurveOverlap o;
  const std::size_t n_seeds = result.seeds.size();
  const std::size_t epochs = result.curve(pair_a, 0).frobenius.size();
  for (std::size_t e = 0; e < epochs; ++e) {
    double mean_a = 0.0, mean_b = 0.0;
    double lo_a = INFINITY, hi_a = -INFINITY, lo_b = INFINITY, hi_b = -INFINITY;
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const double a = result.curve(pair_a, s).frobenius[e];
      const double b = result.curve(pair_b, s).frobenius[e];
      mean_a += a / n_seeds;
      mean_b += b / n_seeds;
      lo_a = std::min(lo_a, a);
      hi_a = std::max(hi_a, a);
      lo_b = std::min(lo_b, b);
      hi_b = std::max(hi_b, b);
    }
    o.gap.push_back(std::abs(mean_a - mean_b));
    o.spread.push_back(std::max(hi_a - lo_a, hi_b - lo_b));
    if (o.gap.back() > o.spread.back()) o.within_spread = false;
  }
  return o;
}

double slower_decrease_p(const SharpnessToyResult& result, std::size_t slow, std::size_t fast,
                         int epoch) {
  std::vector<double> a, b;
  for (std::size_t s = 0; s < result.seeds.size(); ++s) {
    a.push_back(result.curve(slow, s).frobenius.at(static_cast<std::size_t>(epoch)));
    b.push_back(result.curve(fast, s).frobenius.at(static_cast<std::size_t>(epoch)));
  }
  return stats::mann_whitney_greater_p(a, b);
}

nlohmann::json sharpness_summary(const SharpnessToyResult& result, int rank_epoch) {
  const auto& pairs = result.config.pairs;
  nlohmann::json overlaps = nlohmann::json::array();
  nlohmann::json ranks = nlohmann::json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      const double ri = pairs[i].gamma / pairs[i].batch;
      const double rj = pairs[j].gamma / pairs[j].batch;
      if (std::abs(ri - rj) <= 1e-12 * std::max(ri, rj)) {
        const auto o = curve_overlap(result, i, j);
        overlaps.push_back({{"pairs", {i, j}},
                            {"within_spread", o.within_spread},
                            {"max_gap_over_spread", [&] {
                               double m = 0.0;
                               for (std::size_t e = 1; e < o.gap.size(); ++e) {
                                 if (o.spread[e] > 0.0) m = std::max(m, o.gap[e] / o.spread[e]);
                               }
                               return m;
                             }()}});
      }
      if (pairs[i].batch == pairs[j].batch && pairs[i].gamma != pairs[j].gamma) {
        const std::size_t slow = pairs[i].gamma < pairs[j].gamma ? i : j;
        const std::size_t fast = slow == i ? j : i;
        ranks.push_back({{"slow", slow},
                         {"fast", fast},
                         {"epoch", rank_epoch},
                         {"p_value", slower_decrease_p(result, slow, fast, rank_epoch)}});
      }
    }
  }
  nlohmann::json p = nlohmann::json::array();
  for (const auto& q : pairs) p.push_back({q.gamma, q.batch});
  return {{"pairs", p}, {"seeds", result.seeds.size()}, {"epochs", result.config.epochs},
          {"equal_ratio_overlap", overlaps}, {"rank_tests", ranks}};
}

}  // namespace sgdlab
