#include "sgdlab/expcli/runner.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sgdlab/core/csv.hpp"
#include "sgdlab/core/error.hpp"
#include "sgdlab/core/hash.hpp"
#include "sgdlab/core/rng.hpp"
#include "sgdlab/dynamics/sde.hpp"
#include "sgdlab/dynamics/sgd.hpp"
#include "sgdlab/expcli/sharpness.hpp"
#include "sgdlab/fokker_planck/distance.hpp"
#include "sgdlab/fokker_planck/solver.hpp"
#include "sgdlab/landscape/assumptions.hpp"
#include "sgdlab/kernels/ensemble.hpp"
#include "sgdlab/landscape/families.hpp"
#include "sgdlab/metastability/escape.hpp"
#include "sgdlab/stationary/flatness.hpp"
#include "sgdlab/stationary/occupation.hpp"
#include "sgdlab/stationary/probability.hpp"

namespace sgdlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_now(const char* format) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, format, &tm);
  return buf;
}

// Collects outputs and their checksums in write order.
class RunDir {
 public:
  explicit RunDir(fs::path dir) : dir_(std::move(dir)) {}
  const fs::path& path() const { return dir_; }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    files_.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  template <class F>
  void write_with(const std::string& name, F&& f) {
    std::ostringstream ss;
    f(ss);
    write(name, ss.str());
  }
  const json& files() const { return files_; }

 private:
  fs::path dir_;
  json files_ = json::array();
};

Vec to_vec(const json& a) {
  const auto v = a.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Vec default_start(const LandscapeWithCatalog& lc) {
  if (!lc.second.minima.empty()) return lc.second.minima.front().location;
  return Vec::Zero(lc.first.dimension());
}

LandscapeWithCatalog analytic(const ExperimentConfig& c) {
  return build_landscape(LandscapeSpec{c.landscape});
}

struct Context {
  const ExperimentConfig& config;
  RunDir& out;
  std::vector<std::string>& warnings;
  int workers;
};

void run_simulate_sde(Context& ctx) {
  const auto& p = ctx.config.params;
  const auto lc = analytic(ctx.config);
  const auto schedule = Schedule::from_json(ctx.config.schedule);
  const Vec w0 = p["w0"].empty() ? default_start(lc) : to_vec(p["w0"]);
  const auto n = p["trajectories"].get<std::size_t>();
  std::vector<Trajectory> paths(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic) num_threads(ctx.workers)
  for (std::size_t i = 0; i < n; ++i) {
    SdeOptions opt;
    opt.stride = p["stride"].get<std::size_t>();
    opt.stream_id = i;
    try {
      paths[i] = sde_run(lc.first, schedule, w0, p["t_end"].get<double>(), p["dt"].get<double>(),
                         ctx.config.seed, opt);
    } catch (const NumericAbort& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) throw NumericAbort("trajectory " + std::to_string(i) + ": " + errors[i], 0);
  }
  json sidecars = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = n == 1 ? "trajectory.csv" : "trajectory_" + std::to_string(i) + ".csv";
    ctx.out.write_with(name, [&](std::ostream& o) { paths[i].write_csv(o); });
    auto s = paths[i].sidecar();
    s["file"] = name;
    sidecars.push_back(s);
  }
  ctx.out.write_json("trajectories.json", sidecars);
}

void run_simulate_sgd(Context& ctx) {
  const auto& p = ctx.config.params;
  const auto land = build_empirical(ctx.config.landscape);
  for (const auto& w : land.warnings()) ctx.warnings.push_back(w);
  const auto schedule = Schedule::from_json(ctx.config.schedule);
  RandomStream init(ctx.config.seed, 0x1417);
  Vec w0(land.dimension());
  for (auto& v : w0) v = init.normal() * p["init_scale"].get<double>();
  SgdOptions opt;
  opt.stride = p["stride"].get<std::size_t>();
  const auto traj = sgd_run(land, schedule, w0, p["steps"].get<std::size_t>(), ctx.config.seed, opt);
  ctx.out.write_with("trajectory.csv", [&](std::ostream& o) { traj.write_csv(o); });
  ctx.out.write_with("loss.csv", [&](std::ostream& o) {
    csv::Writer w(o, {"step", "loss", "gradient_norm"});
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Vec s = traj.state(i);
      w.field(traj.times[i]).field(land.loss(s)).field(land.gradient(s).norm()).end_row();
    }
  });
  ctx.out.write_json("trajectory.json", traj.sidecar());
}

void run_fokker_planck(Context& ctx) {
  const auto& p = ctx.config.params;
  const auto lc = analytic(ctx.config);
  const auto& land = lc.first;
  const auto schedule = Schedule::from_json(ctx.config.schedule);
  const double eta_inf = schedule.eta_limit(land.noise().base);
  int cells = p["cells"].get<int>();
  if (cells == 0) cells = land.dimension() == 1 ? 1024 : 128;
  const auto grid = GridSpec::covering(lc.second, eta_inf, cells);
  const Vec start = p["start"].empty() ? default_start(lc) : to_vec(p["start"]);
  const auto p0 = DensityField::gaussian(grid, start, p["std_cells"].get<double>());

  std::optional<DensityField> pinf;
  if (land.noise().is_constant()) {
    try {
      pinf = stationary_density(land, eta_inf, grid).density;
    } catch (const std::domain_error& e) {
      ctx.warnings.push_back(std::string("tail-mass: ") + e.what() + "; distance not reported");
    }
  }
  std::vector<double> times, dists;
  EvolveOptions opt;
  opt.scheme = time_scheme_from_string(p["scheme"].get<std::string>());
  opt.snapshot_every = p["snapshot_every"].get<std::size_t>();
  opt.observe_every = p["distance_every"].get<std::size_t>();
  opt.workers = ctx.workers;
  if (pinf) {
    opt.observer = [&](double t, const DensityField& f) {
      times.push_back(t);
      dists.push_back(weighted_l2_distance(f, *pinf).value);
    };
  }
  const auto r = evolve(land, schedule, p0, p["t_end"].get<double>(), p["dt"].get<double>(), opt);

  ctx.out.write_with("final.csv", [&](std::ostream& o) { r.final_field.write_csv(o); });
  if (!r.snapshots.empty()) {
    ctx.out.write_with("snapshots.csv", [&](std::ostream& o) {
      std::vector<std::string> header = {"t", "x"};
      if (grid.dimension == 2) header.push_back("y");
      header.push_back("p");
      csv::Writer w(o, header);
      for (std::size_t s = 0; s < r.snapshots.size(); ++s) {
        const auto& f = r.snapshots[s];
        for (std::size_t i = 0; i < f.values.size(); ++i) {
          const Vec x = grid.point(i);
          w.field(r.snapshot_times[s]);
          for (Eigen::Index a = 0; a < x.size(); ++a) w.field(x[a]);
          w.field(f.values[i]).end_row();
        }
      }
    });
  }
  json summary = {{"grid", grid.to_json()},
                  {"eta_inf", eta_inf},
                  {"steps", r.steps},
                  {"final_time", r.final_time},
                  {"scheme", to_string(r.scheme_used)},
                  {"explicit_bound", r.explicit_bound},
                  {"mass_drift", r.mass_drift}};
  json moments = json::array();
  for (int a = 0; a < grid.dimension; ++a) {
    moments.push_back({{"mean", r.final_field.mean(a)}, {"variance", r.final_field.variance(a)}});
  }
  summary["final_moments"] = moments;
  if (pinf) {
    ctx.out.write_with("distance.csv", [&](std::ostream& o) { write_distance_csv(o, times, dists); });
    try {
      const auto fit = fit_decay_rate(times, dists, times.front(), times.back());
      summary["decay_fit"] = {{"rate", fit.rate}, {"r2", fit.r2}, {"points", fit.points}};
    } catch (const std::exception& e) {
      summary["decay_fit"] = nullptr;
      ctx.warnings.push_back(std::string("decay fit skipped: ") + e.what());
    }
  }
  ctx.out.write_json("fokker_planck.json", summary);
}

EscapeSpec escape_spec(const json& p, int workers) {
  EscapeSpec s;
  s.from = p["from"].get<int>();
  s.to = p["to"].get<int>();
  s.radius = p["radius"].get<double>();
  s.t_max = p["t_max"].get<double>();
  s.trajectories = p["trajectories"].get<std::size_t>();
  s.workers = workers;
  return s;
}

void run_escape_time(Context& ctx) {
  const auto& p = ctx.config.params;
  const auto lc = analytic(ctx.config);
  const auto schedule = Schedule::from_json(ctx.config.schedule);
  const auto r = mc_escape_time(lc.first, lc.second, escape_spec(p, ctx.workers), schedule,
                                p["dt"].get<double>(), ctx.config.seed);
  for (const auto& n : r.notes) ctx.warnings.push_back("escape: " + n);
  ctx.out.write_with("escape_samples.csv", [&](std::ostream& o) { r.write_samples_csv(o); });
  ctx.out.write_json("escape.json", r.to_json());
}

void run_escape_sweep(Context& ctx) {
  const auto& p = ctx.config.params;
  const auto lc = analytic(ctx.config);
  const auto t = escape_sweep(lc.first, lc.second, escape_spec(p, ctx.workers),
                              p["eta_values"].get<std::vector<double>>(), p["dt"].get<double>(),
                              ctx.config.seed);
  for (const auto& row : t.rows) {
    for (const auto& n : row.report.notes) {
      ctx.warnings.push_back("escape at eta=" + csv::format_double(row.eta) + ": " + n);
    }
  }
  ctx.out.write_with("sweep.csv", [&](std::ostream& o) { t.write_csv(o); });
  ctx.out.write_json("sweep.json", t.to_json());
}

void run_stationary_prob(Context& ctx) {
  const auto& p = ctx.config.params;
  const auto lc = analytic(ctx.config);
  const double eta = p["eta"].get<double>();
  const double eps = p["epsilon"].get<double>();
  std::vector<int> ids = p["minima"].get<std::vector<int>>();
  if (ids.empty()) {
    for (std::size_t i = 0; i < lc.second.minima.size(); ++i) ids.push_back(static_cast<int>(i));
  }
  const auto norm = gibbs_normalizer(lc.first, lc.second, eta, p["cells"].get<int>());
  std::vector<MinimizerProbability> probs;
  for (int id : ids) {
    probs.push_back(minimizer_probability(lc.first, lc.second, id, eta, eps, norm));
    if (probs.back().closed_form_exceeds_one) {
      ctx.warnings.push_back("closed form exceeds 1 at minimum " + std::to_string(id) +
                             " (large eta * epsilon^2)");
    }
  }
  ctx.out.write_with("probabilities.csv", [&](std::ostream& o) {
    csv::Writer w(o, {"minimum", "eta", "epsilon", "closed_form", "closed_form_literal",
                      "closed_form_double_exponent", "quadrature", "quadrature_error",
                      "relative_gap", "kappa", "exp_factor", "determinant_factor", "product_term",
                      "eps_factor", "normalization", "matching_convention"});
    for (const auto& q : probs) {
      const auto& c = q.components;
      w.field(q.minimum).field(q.eta).field(q.epsilon).field(q.closed_form)
          .field(q.closed_form_literal).field(q.closed_form_double_exponent).field(q.quadrature)
          .field(q.quadrature_error).field(q.relative_gap).field(c.kappa).field(c.exp_factor)
          .field(c.determinant_factor).field(c.product_term).field(c.eps_factor)
          .field(c.normalization).field(q.matching_convention).end_row();
    }
  });
  ctx.out.write_with("ratios.csv", [&](std::ostream& o) {
    csv::Writer w(o, {"id1", "id2", "ratio", "label"});
    for (int a : ids) {
      for (int b : ids) {
        if (a == b) continue;
        const auto r = probability_ratio(lc.second, a, b, eta, eps);
        w.field(a).field(b).field(r.value).field(r.label).end_row();
      }
    }
  });
  json j = {{"kappa", norm.kappa}, {"log_kappa", norm.log_kappa},
            {"tail_fraction", norm.tail_fraction}, {"grid", norm.grid.to_json()},
            {"minima", json::array()}};
  for (const auto& q : probs) j["minima"].push_back(q.to_json());
  ctx.out.write_json("stationary.json", j);
}

void run_occupation(Context& ctx) {
  const auto& p = ctx.config.params;
  const auto lc = analytic(ctx.config);
  OccupationOptions opt;
  opt.streams = p["streams"].get<std::size_t>();
  opt.workers = ctx.workers;
  const auto r = occupation_ratio_mc(lc.first, lc.second, p["id1"].get<int>(), p["id2"].get<int>(),
                                     p["eta"].get<double>(), p["epsilon"].get<double>(),
                                     p["t_burn"].get<double>(), p["t_total"].get<double>(),
                                     p["dt"].get<double>(), ctx.config.seed, opt);
  for (const auto& w : r.warnings) ctx.warnings.push_back(w);
  ctx.out.write_with("streams.csv", [&](std::ostream& o) {
    csv::Writer w(o, {"stream", "ratio"});
    for (std::size_t s = 0; s < r.stream_ratios.size(); ++s) w.field(s).field(r.stream_ratios[s]).end_row();
  });
  ctx.out.write_json("occupation.json", r.to_json());
}

void run_appendix_h(Context& ctx) {
  const auto& p = ctx.config.params;
  const auto t = appendix_h_example(p["example"].get<int>(),
                                    p["m_over_gamma"].get<std::vector<double>>(),
                                    p["epsilon"].get<double>());
  for (const auto& [name, ok] : t.checks) {
    if (!ok) ctx.warnings.push_back("check failed: " + name);
  }
  ctx.out.write_with("probabilities.csv", [&](std::ostream& o) { t.write_probabilities_csv(o); });
  ctx.out.write_with("differences.csv", [&](std::ostream& o) { t.write_differences_csv(o); });
  ctx.out.write_json("appendix_h.json", t.manifest());
}

void run_verify_noise(Context& ctx) {
  const auto& p = ctx.config.params;
  const auto land = build_empirical(ctx.config.landscape);
  Vec w;
  if (p["w"].empty()) {
    w = land.true_weights();
    w[0] += 1.0;
  } else {
    w = to_vec(p["w"]);
  }
  const auto sizes = p["batch_sizes"].get<std::vector<std::size_t>>();
  std::vector<NoiseStatsReport> reports;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    reports.push_back(noise_stats(land, w, sizes[i], p["draws"].get<std::size_t>(),
                                  RandomStream::derive_key(ctx.config.seed, i)));
  }
  ctx.out.write_with("noise_stats.csv", [&](std::ostream& o) {
    csv::Writer wr(o, {"batch_size", "draws", "empirical_trace", "reference_trace",
                       "variance_relative_error", "mean_z", "offdiag_max_z"});
    for (const auto& r : reports) {
      wr.field(r.batch_size).field(r.draws).field(r.covariance.trace())
          .field(r.reference_covariance.trace()).field(r.variance_relative_error).field(r.mean_z)
          .field(r.offdiag_max_z).end_row();
    }
  });
  json j = json::array();
  for (const auto& r : reports) j.push_back(r.to_json());
  ctx.out.write_json("noise_stats.json", j);
}

void run_check_assumptions(Context& ctx) {
  const auto& p = ctx.config.params;
  std::shared_ptr<const Potential> pot;
  AssumptionOptions opt;
  opt.seed = ctx.config.seed;
  opt.directions = p["directions"].get<int>();
  if (ctx.config.landscape.at("kind") == "empirical") {
    const auto land = build_empirical(ctx.config.landscape);
    for (const auto& w : land.warnings()) ctx.warnings.push_back(w);
    pot = land.as_potential();
  } else {
    pot = analytic(ctx.config).first.potential_ptr();
  }
  const auto r = check_assumptions(*pot, p["shells"].get<std::vector<double>>(),
                                   p["grid_resolution"].get<int>(), opt);
  if (r.confinement == Verdict::Fail) ctx.warnings.push_back("assumption: confinement fails");
  if (r.growth == Verdict::Fail) ctx.warnings.push_back("assumption: growth fails");
  if (r.boundedness == Verdict::Fail) ctx.warnings.push_back("assumption: boundedness fails");
  ctx.out.write_with("shells.csv", [&](std::ostream& o) {
    csv::Writer w(o, {"radius", "min_loss", "max_loss", "a2_growth", "a2_ratio", "a3_value",
                      "non_finite"});
    for (const auto& s : r.shells) {
      w.field(s.radius).field(s.min_loss).field(s.max_loss).field(s.a2_growth).field(s.a2_ratio)
          .field(s.a3_value).field(s.non_finite).end_row();
    }
  });
  ctx.out.write_json("assumptions.json", r.to_json());
}

void run_sharpness(Context& ctx) {
  const auto& p = ctx.config.params;
  SharpnessToyConfig c;
  c.dimension = p["dimension"].get<int>();
  c.samples = p["samples"].get<std::size_t>();
  c.l2 = p["l2"].get<double>();
  c.init_scale = p["init_scale"].get<double>();
  c.weight_scale = p["weight_scale"].get<double>();
  c.epochs = p["epochs"].get<int>();
  c.pairs.clear();
  for (const auto& q : p["pairs"]) c.pairs.push_back({q[0].get<double>(), q[1].get<std::size_t>()});
  c.seeds = p["seeds"].get<int>();
  c.master_seed = ctx.config.seed;
  c.data_seed = p["data_seed"].get<std::uint64_t>();
  c.workers = ctx.workers;
  const auto r = sharpness_toy(c);
  ctx.out.write_with("sharpness.csv", [&](std::ostream& o) { r.write_csv(o); });
  ctx.out.write_json("sharpness_summary.json", sharpness_summary(r, p["rank_epoch"].get<int>()));
}

void dispatch(Context& ctx) {
  switch (ctx.config.kind) {
    case ExperimentKind::SimulateSde: return run_simulate_sde(ctx);
    case ExperimentKind::SimulateSgd: return run_simulate_sgd(ctx);
    case ExperimentKind::FokkerPlanck: return run_fokker_planck(ctx);
    case ExperimentKind::EscapeTime: return run_escape_time(ctx);
    case ExperimentKind::EscapeSweep: return run_escape_sweep(ctx);
    case ExperimentKind::StationaryProb: return run_stationary_prob(ctx);
    case ExperimentKind::OccupationRatio: return run_occupation(ctx);
    case ExperimentKind::AppendixH: return run_appendix_h(ctx);
    case ExperimentKind::VerifyNoise: return run_verify_noise(ctx);
    case ExperimentKind::CheckAssumptions: return run_check_assumptions(ctx);
    case ExperimentKind::SharpnessToy: return run_sharpness(ctx);
  }
}

}  // namespace

fs::path run_experiment(const ExperimentConfig& config, RunOptions options) {
  const fs::path root = options.output_dir ? *options.output_dir : fs::path(config.output_dir);
  fs::create_directories(root);
  const std::string hash = config.hash();
  const std::string base = to_string(config.kind) + "-" + utc_now("%Y%m%dT%H%M%SZ") + "-" + hash.substr(0, 8);
  fs::path dir = root / base;
  for (int k = 1; !fs::create_directory(dir); ++k) dir = root / (base + "-" + std::to_string(k));

  RunDir out(dir);
  std::vector<std::string> warnings;
  const std::string started = utc_now("%Y-%m-%dT%H:%M:%SZ");
  out.write_json("config.resolved.json", config.resolved());
  Context ctx{config, out, warnings, kernels::resolve_workers(options.workers)};

  json manifest = {{"config_hash", hash},
                   {"tool_version", SGDLAB_VERSION},
                   {"kind", to_string(config.kind)},
                   {"seed", config.seed},
                   {"started", started}};
  auto finish = [&](const std::string& status) {
    manifest["finished"] = utc_now("%Y-%m-%dT%H:%M:%SZ");
    manifest["status"] = status;
    manifest["files"] = out.files();
    manifest["warnings"] = warnings;
    std::ofstream m(dir / "manifest.json", std::ios::binary);
    m << manifest.dump(2) << "\n";
  };
  try {
    dispatch(ctx);
  } catch (const std::exception& e) {
    manifest["error"] = e.what();
    finish("failed");
    throw;
  }
  finish("ok");
  return dir;
}

json report_run(const fs::path& run_dir) {
  std::ifstream in(run_dir / "manifest.json", std::ios::binary);
  if (!in) throw std::runtime_error("no manifest.json in " + run_dir.string());
  json manifest = json::parse(in);
  json mismatched = json::array();
  for (const auto& f : manifest.value("files", json::array())) {
    std::ifstream file(run_dir / f.at("path").get<std::string>(), std::ios::binary);
    std::stringstream ss;
    ss << file.rdbuf();
    if (!file || sha256_hex(ss.str()) != f.at("sha256").get<std::string>()) {
      mismatched.push_back(f.at("path"));
    }
  }
  manifest["checksums_ok"] = mismatched.empty();
  manifest["mismatched_files"] = mismatched;
  return manifest;
}

}  // namespace sgdlab
