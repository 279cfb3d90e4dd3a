#include "sgdlab/dynamics/sde.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgdlab/core/error.hpp"

namespace sgdlab {

EulerMaruyama::EulerMaruyama(const Landscape& landscape)
    : potential_(&landscape.potential()),
      noise_(&landscape.noise()),
      constant_beta_(landscape.noise().is_constant()),
      beta_(landscape.noise().base),
      grad_(static_cast<std::size_t>(landscape.dimension())) {}

double max_stable_dt(const Landscape& landscape) {
  const double s = landscape.stiffness();
  return s > 0.0 ? 0.1 / s : std::numeric_limits<double>::infinity();
}

Trajectory sde_run(const Landscape& landscape, const Schedule& schedule, const Vec& w0,
                   double t_end, double dt, std::uint64_t seed, SdeOptions options) {
  const int d = landscape.dimension();
  if (w0.size() != d) throw std::invalid_argument("w0 dimension mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(t_end >= dt)) throw std::invalid_argument("t_end must be >= dt");
  if (options.enforce_dt_rule && dt > max_stable_dt(landscape) * (1.0 + 1e-12)) {
    throw std::invalid_argument("dt exceeds 0.1 / lambda_max = " +
                                std::to_string(max_stable_dt(landscape)));
  }
  schedule.validate(t_end);
  const std::size_t stride = std::max<std::size_t>(options.stride, 1);

  Trajectory traj;
  traj.dimension = d;
  traj.schedule = schedule.to_json();
  traj.master_seed = seed;
  traj.stream_id = options.stream_id;
  traj.landscape_hash = landscape.spec().hash();

  const Box fence = landscape.domain().scaled(2.0);
  RandomStream rng(seed, options.stream_id);
  EulerMaruyama em(landscape);
  std::vector<double> w(w0.data(), w0.data() + d);
  traj.push(0.0, w);

  const auto n_steps = static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
  const bool constant = schedule.is_constant();
  const double ratio0 = schedule.ratio(0.0);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    em.step(w, constant ? ratio0 : schedule.ratio(t), dt, rng);
    if (!fence.contains(w)) {
      throw NumericAbort("SDE iterate left twice the domain box", static_cast<std::int64_t>(k + 1));
    }
    if ((k + 1) % stride == 0 || k + 1 == n_steps) {
      traj.push(static_cast<double>(k + 1) * dt, w);
    }
  }
  traj.steps = n_steps;
  return traj;
}

}  // namespace sgdlab
