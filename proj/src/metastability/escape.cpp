#include "sgdlab/metastability/escape.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgdlab/core/csv.hpp"
#include "sgdlab/core/rng.hpp"
#include "sgdlab/dynamics/sde.hpp"
#include "sgdlab/kernels/ensemble.hpp"

namespace sgdlab {

std::vector<double> EscapeReport::hitting_times() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!censored_flags[i]) out.push_back(samples[i]);
  }
  return out;
}

nlohmann::json EscapeReport::to_json() const {
  nlohmann::json j = {{"kramers_time", kramers.time},
                      {"kramers_exponent", kramers.exponent},
                      {"kramers_prefactor", kramers.prefactor},
                      {"eta", kramers.eta},
                      {"barrier", kramers.barrier},
                      {"gamma", gamma},
                      {"batch", batch},
                      {"beta", beta},
                      {"radius", radius},
                      {"t_max", t_max},
                      {"dt", dt},
                      {"trajectories", trajectories},
                      {"censored", censored},
                      {"has_estimate", has_estimate},
                      {"lower_bound", lower_bound},
                      {"notes", notes}};
  if (has_estimate) {
    j["mc_mean"] = mc_mean;
    j["ci95"] = {ci.lo, ci.hi};
    j["ratio_mc_over_kramers"] = ratio;
  }
  return j;
}

void EscapeReport::write_samples_csv(std::ostream& out) const {
  csv::Writer w(out, {"trajectory", "tau", "censored"});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    w.field(i);
    w.field(samples[i]);
    w.field(static_cast<int>(censored_flags[i]));
    w.end_row();
  }
}

EscapeReport mc_escape_time(const Landscape& landscape, const CriticalPointCatalog& catalog,
                            const EscapeSpec& spec, const Schedule& schedule, double dt,
                            std::uint64_t seed) {
  if (!schedule.is_constant()) {
    throw std::invalid_argument("escape times need a constant schedule");
  }
  schedule.validate(0.0);
  if (dt > max_stable_dt(landscape) * (1.0 + 1e-12)) {
    throw std::invalid_argument("dt exceeds 0.1 / lambda_max");
  }
  const Barrier& barrier = catalog.barrier(spec.from, spec.to);
  const auto& start = catalog.minima.at(static_cast<std::size_t>(spec.from)).location;
  const auto& target = catalog.minima.at(static_cast<std::size_t>(spec.to)).location;
  const auto& saddle = catalog.saddles.at(static_cast<std::size_t>(barrier.saddle)).location;

  EscapeReport r;
  r.gamma = schedule.gamma(0.0);
  r.batch = schedule.batch(0.0);
  r.beta = landscape.beta(start);
  r.dt = dt;
  r.kramers = kramers_time(catalog, spec.from, spec.to, r.gamma, r.batch, r.beta);
  const double to_saddle = (target - saddle).norm();
  r.radius = spec.radius > 0.0 ? spec.radius : 0.1 * to_saddle;
  if (!(r.radius < 0.5 * to_saddle)) {
    throw std::invalid_argument("arrival radius must be below half the target-to-saddle distance");
  }
  r.t_max = spec.t_max > 0.0 ? spec.t_max : 10.0 * r.kramers.time;
  r.trajectories = spec.trajectories;
  if (barrier.ambiguous) {
    r.notes.push_back("another saddle between these minima is within 1% in height");
  }
  if (!landscape.noise().is_constant()) {
    r.notes.push_back("noise amplitude varies in space; Kramers uses beta at the starting minimum");
  }
  if (spec.trajectories == 0) return r;

  kernels::FirstPassageProblem p;
  p.landscape = &landscape;
  p.start = start;
  p.target = target;
  p.radius = r.radius;
  p.ratio = r.gamma / r.batch;
  p.dt = dt;
  p.t_max = r.t_max;
  p.seed = seed;
  auto samples = spec.serial ? kernels::first_passage_serial(p, spec.trajectories)
                             : kernels::first_passage_parallel(p, spec.trajectories, spec.workers);
  r.samples = std::move(samples.times);
  r.censored_flags = std::move(samples.censored);
  for (auto c : r.censored_flags) r.censored += c;

  const auto hits = r.hitting_times();
  if (hits.empty()) {
    r.notes.push_back("every trajectory was censored: no estimate; increase t_max or gamma/M");
    return r;
  }
  r.has_estimate = true;
  r.mc_mean = stats::mean(hits);
  r.ci = stats::bootstrap_mean_ci(hits, 10000, 0.95, mix64(seed ^ 0xC1));
  r.ratio = r.mc_mean / r.kramers.time;
  if (static_cast<double>(r.censored) > 0.05 * static_cast<double>(r.trajectories)) {
    r.lower_bound = true;
    r.notes.push_back("more than 5% of trajectories were censored; the mean is a lower bound");
  }
  return r;
}

nlohmann::json SweepTable::to_json() const {
  nlohmann::json rowsj = nlohmann::json::array();
  for (const auto& row : rows) {
    auto j = row.report.to_json();
    j["eta"] = row.eta;
    rowsj.push_back(j);
  }
  return {{"rows", rowsj}, {"barrier", barrier}, {"slope", slope}, {"slope_stderr", slope_stderr}};
}

void SweepTable::write_csv(std::ostream& out) const {
  csv::Writer w(out, {"eta", "gamma", "kramers", "mc_mean", "ci_lo", "ci_hi", "ratio", "censored",
                      "trajectories"});
  for (const auto& row : rows) {
    const auto& r = row.report;
    w.field(row.eta);
    w.field(row.gamma);
    w.field(r.kramers.time);
    w.field(r.has_estimate ? r.mc_mean : std::numeric_limits<double>::quiet_NaN());
    w.field(r.has_estimate ? r.ci.lo : std::numeric_limits<double>::quiet_NaN());
    w.field(r.has_estimate ? r.ci.hi : std::numeric_limits<double>::quiet_NaN());
    w.field(r.has_estimate ? r.ratio : std::numeric_limits<double>::quiet_NaN());
    w.field(r.censored);
    w.field(r.trajectories);
    w.end_row();
  }
}

SweepTable escape_sweep(const Landscape& landscape, const CriticalPointCatalog& catalog,
                        const EscapeSpec& spec, const std::vector<double>& eta_values, double dt,
                        std::uint64_t seed) {
  SweepTable table;
  table.barrier = catalog.barrier(spec.from, spec.to).height;
  table.slope = std::numeric_limits<double>::quiet_NaN();
  table.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  if (spec.trajectories == 0) return table;
  const double beta = landscape.beta(catalog.minima.at(static_cast<std::size_t>(spec.from)).location);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eta_values.size(); ++i) {
    const double eta = eta_values[i];
    if (!(eta > 0.0)) throw std::invalid_argument("sweep eta values must be > 0");
    const double gamma = 2.0 / (eta * beta);
    const auto schedule = Schedule::constant(gamma, 1.0);
    SweepRow row{eta, gamma, mc_escape_time(landscape, catalog, spec, schedule, dt,
                                            RandomStream::derive_key(seed, i))};
    if (row.report.has_estimate) {
      x.push_back(eta);
      y.push_back(std::log(row.report.mc_mean));
    }
    table.rows.push_back(std::move(row));
  }
  if (x.size() >= 2) {
    const auto fit = stats::fit_line(x, y);
    table.slope = fit.slope;
    table.slope_stderr = fit.slope_stderr;
  }
  return table;
}

}  // namespace sgdlab
