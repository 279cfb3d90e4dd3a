#include "sgdlab/stationary/occupation.hpp"

#include <cmath>
#include <stdexcept>

#include "sgdlab/kernels/ensemble.hpp"
#include "sgdlab/metastability/kramers.hpp"
#include "sgdlab/stationary/probability.hpp"

namespace sgdlab {

nlohmann::json OccupationReport::to_json() const {
  nlohmann::json j = {{"id1", id1},
                      {"id2", id2},
                      {"eta", eta},
                      {"epsilon", epsilon},
                      {"t_burn", t_burn},
                      {"t_total", t_total},
                      {"dt", dt},
                      {"has_ratio", has_ratio},
                      {"occupancy1", occupancy1},
                      {"occupancy2", occupancy2},
                      {"switches", switches},
                      {"max_kramers", max_kramers},
                      {"closed_form_ratio", closed_form_ratio},
                      {"closed_form_label", closed_form_label},
                      {"stream_ratios", stream_ratios},
                      {"warnings", warnings}};
  if (has_ratio) {
    j["ratio"] = ratio;
    j["standard_error"] = standard_error;
  }
  return j;
}

OccupationReport occupation_ratio_mc(const Landscape& landscape,
                                     const CriticalPointCatalog& catalog, int id1, int id2,
                                     double eta, double epsilon, double t_burn, double t_total,
                                     double dt, std::uint64_t seed, OccupationOptions options) {
  if (!landscape.noise().is_constant()) {
    throw std::invalid_argument("occupation ratio requires constant noise");
  }
  if (!(eta > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("eta and epsilon must be > 0");
  if (!(t_total > t_burn) || t_burn < 0.0) throw std::invalid_argument("need 0 <= t_burn < t_total");
  if (options.streams == 0) throw std::invalid_argument("streams must be >= 1");
  const auto& m1 = catalog.minima.at(static_cast<std::size_t>(id1));
  const auto& m2 = catalog.minima.at(static_cast<std::size_t>(id2));

  OccupationReport r;
  r.id1 = id1;
  r.id2 = id2;
  r.eta = eta;
  r.epsilon = epsilon;
  r.t_burn = t_burn;
  r.t_total = t_total;
  r.dt = dt;
  const auto closed = probability_ratio(catalog, id1, id2, eta, epsilon);
  r.closed_form_ratio = closed.value;
  r.closed_form_label = closed.label;

  const double beta = landscape.noise().base;
  const double gamma = 2.0 / (eta * beta);
  if (id1 != id2 && catalog.has_barrier(id1, id2) && catalog.has_barrier(id2, id1)) {
    r.max_kramers = std::max(kramers_time(catalog, id1, id2, gamma, 1.0, beta).time,
                             kramers_time(catalog, id2, id1, gamma, 1.0, beta).time);
    if (t_total - t_burn < 100.0 * r.max_kramers) {
      r.warnings.push_back("run length after burn-in is below 100x the Kramers time " +
                           std::to_string(r.max_kramers));
    }
  }

  kernels::OccupationProblem problem;
  problem.landscape = &landscape;
  problem.start = m1.location;
  problem.centers = {m1.location, m2.location};
  problem.radius = epsilon;
  problem.ratio = gamma;
  problem.dt = dt;
  problem.t_burn = t_burn;
  problem.t_total = t_total;
  problem.seed = seed;
  const auto samples = options.serial
                           ? kernels::occupation_serial(problem, options.streams)
                           : kernels::occupation_parallel(problem, options.streams, options.workers);

  const std::size_t n = options.streams;
  double a = 0.0;
  double b = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    a += samples.occupancy[s][0];
    b += samples.occupancy[s][1];
    r.switches += samples.switches[s];
    const double sb = samples.occupancy[s][1];
    r.stream_ratios.push_back(sb > 0.0 ? samples.occupancy[s][0] / sb : 0.0);
  }
  r.occupancy1 = a;
  r.occupancy2 = b;
  if (a <= 0.0 || b <= 0.0) {
    r.warnings.push_back("an occupation is zero; no ratio reported");
    return r;
  }
  r.has_ratio = true;
  r.ratio = a / b;
  if (n >= 2) {
    // Delete-one jackknife of the pooled ratio.
    std::vector<double> loo(n);
    double mean = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double bb = b - samples.occupancy[s][1];
      loo[s] = bb > 0.0 ? (a - samples.occupancy[s][0]) / bb : r.ratio;
      mean += loo[s] / n;
    }
    double ss = 0.0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    r.standard_error = std::sqrt((n - 1.0) / n * ss);
  }
  return r;
}

}  // namespace sgdlab
