#include "sgdlab/kernels/ensemble.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sgdlab/core/error.hpp"
#include "sgdlab/core/rng.hpp"
#include "sgdlab/dynamics/sde.hpp"

namespace sgdlab::kernels {
namespace {

double squared_distance(const std::vector<double>& w, const Vec& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = w[i] - c[static_cast<Eigen::Index>(i)];
    s += d * d;
  }
  return s;
}

void check_problem(const FirstPassageProblem& p) {
  if (!p.landscape) throw std::invalid_argument("first-passage problem needs a landscape");
  if (!(p.dt > 0.0) || !(p.t_max > 0.0) || !(p.radius > 0.0) || !(p.ratio >= 0.0)) {
    throw std::invalid_argument("first-passage problem has non-positive dt, t_max or radius");
  }
}

// Runs trajectory `index`; returns false on divergence.
bool one_passage(const FirstPassageProblem& p, std::size_t index, double& time, std::uint8_t& censored,
                 std::int64_t& bad_step) {
  const Landscape& l = *p.landscape;
  const Box fence = l.domain().scaled(2.0);
  RandomStream rng(p.seed, p.first_stream + index);
  EulerMaruyama em(l);
  std::vector<double> w(p.start.data(), p.start.data() + p.start.size());
  const double r2 = p.radius * p.radius;
  const auto max_steps = static_cast<std::int64_t>(std::ceil(p.t_max / p.dt - 1e-9));
  for (std::int64_t k = 1; k <= max_steps; ++k) {
    em.step(w, p.ratio, p.dt, rng);
    if (squared_distance(w, p.target) <= r2) {
      time = static_cast<double>(k) * p.dt;
      censored = 0;
      return true;
    }
    if (!fence.contains(w)) {
      bad_step = k;
      return false;
    }
  }
  time = p.t_max;
  censored = 1;
  return true;
}

void check_problem(const OccupationProblem& p) {
  if (!p.landscape) throw std::invalid_argument("occupation problem needs a landscape");
  if (!(p.dt > 0.0) || !(p.radius > 0.0) || !(p.t_total > p.t_burn) || p.t_burn < 0.0) {
    throw std::invalid_argument("occupation problem needs dt, radius > 0 and t_total > t_burn >= 0");
  }
}

bool one_occupation(const OccupationProblem& p, std::size_t index, std::vector<double>& occ,
                    std::int64_t& switches, std::int64_t& bad_step) {
  const Landscape& l = *p.landscape;
  const Box fence = l.domain().scaled(2.0);
  RandomStream rng(p.seed, index);
  EulerMaruyama em(l);
  std::vector<double> w(p.start.data(), p.start.data() + p.start.size());
  const double r2 = p.radius * p.radius;
  const auto burn = static_cast<std::int64_t>(std::llround(p.t_burn / p.dt));
  const auto total = static_cast<std::int64_t>(std::llround(p.t_total / p.dt));
  std::vector<std::int64_t> counts(p.centers.size(), 0);
  int last = -1;
  switches = 0;
  for (std::int64_t k = 1; k <= total; ++k) {
    em.step(w, p.ratio, p.dt, rng);
    if (!fence.contains(w)) {
      bad_step = k;
      return false;
    }
    if (k <= burn) continue;
    for (std::size_t c = 0; c < p.centers.size(); ++c) {
      if (squared_distance(w, p.centers[c]) <= r2) {
        ++counts[c];
        if (last >= 0 && last != static_cast<int>(c)) ++switches;
        last = static_cast<int>(c);
        break;
      }
    }
  }
  occ.resize(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c) occ[c] = static_cast<double>(counts[c]) * p.dt;
  return true;
}

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SGDLAB_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

FirstPassageSamples first_passage_serial(const FirstPassageProblem& problem, std::size_t count) {
  check_problem(problem);
  FirstPassageSamples out;
  out.times.resize(count);
  out.censored.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t bad = 0;
    if (!one_passage(problem, i, out.times[i], out.censored[i], bad)) {
      throw NumericAbort("trajectory " + std::to_string(i) + " left twice the domain box", bad);
    }
  }
  return out;
}

FirstPassageSamples first_passage_parallel(const FirstPassageProblem& problem, std::size_t count,
                                           int workers) {
  check_problem(problem);
  FirstPassageSamples out;
  out.times.resize(count);
  out.censored.resize(count);
  std::vector<std::int64_t> bad(count, 0);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve_workers(workers))
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    one_passage(problem, u, out.times[u], out.censored[u], bad[u]);
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (bad[i] != 0) {
      throw NumericAbort("trajectory " + std::to_string(i) + " left twice the domain box", bad[i]);
    }
  }
  return out;
}

OccupationSamples occupation_serial(const OccupationProblem& problem, std::size_t streams) {
  check_problem(problem);
  OccupationSamples out;
  out.occupancy.resize(streams);
  out.switches.resize(streams);
  for (std::size_t s = 0; s < streams; ++s) {
    std::int64_t bad = 0;
    if (!one_occupation(problem, s, out.occupancy[s], out.switches[s], bad)) {
      throw NumericAbort("stream " + std::to_string(s) + " left twice the domain box", bad);
    }
  }
  return out;
}

OccupationSamples occupation_parallel(const OccupationProblem& problem, std::size_t streams,
                                      int workers) {
  check_problem(problem);
  OccupationSamples out;
  out.occupancy.resize(streams);
  out.switches.resize(streams);
  std::vector<std::int64_t> bad(streams, 0);
  const auto n = static_cast<std::int64_t>(streams);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_workers(workers))
  for (std::int64_t s = 0; s < n; ++s) {
    const auto u = static_cast<std::size_t>(s);
    one_occupation(problem, u, out.occupancy[u], out.switches[u], bad[u]);
  }
  for (std::size_t s = 0; s < streams; ++s) {
    if (bad[s] != 0) {
      throw NumericAbort("stream " + std::to_string(s) + " left twice the domain box", bad[s]);
    }
  }
  return out;
}

}  // namespace sgdlab::kernels
