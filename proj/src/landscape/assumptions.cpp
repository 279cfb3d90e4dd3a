#include "sgdlab/landscape/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sgdlab/core/rng.hpp"

namespace sgdlab {
namespace {

std::vector<Vec> shell_directions(int d, int count, std::uint64_t seed) {
  std::vector<Vec> dirs;
  if (d == 1) {
    dirs.push_back(Vec::Constant(1, 1.0));
    dirs.push_back(Vec::Constant(1, -1.0));
    return dirs;
  }
  if (d == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * k / count;
      Vec u(2);
      u << std::cos(a), std::sin(a);
      dirs.push_back(u);
    }
    return dirs;
  }
  RandomStream rng(seed, 0xA55);
  for (int k = 0; k < count; ++k) {
    Vec u(d);
    for (int j = 0; j < d; ++j) u[j] = rng.normal();
    dirs.push_back(u.normalized());
  }
  return dirs;
}

struct PointTerms {
  double loss, grad2, trace;
};

PointTerms terms_at(const Potential& p, const Vec& w) {
  const Vec g = p.gradient(w);
  const Mat h = p.hessian(w);
  return {p.value(w), g.squaredNorm(), h.trace()};
}

// True when the last half of the sequence is strictly increasing.
bool eventually_increasing(const std::vector<double>& v) {
  if (v.size() < 2) return false;
  const std::size_t start = v.size() / 2 == 0 ? 0 : (v.size() - 1) / 2;
  for (std::size_t i = start + 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

bool eventually_decreasing(const std::vector<double>& v) {
  std::vector<double> neg(v.size());
  std::transform(v.begin(), v.end(), neg.begin(), [](double x) { return -x; });
  return eventually_increasing(neg);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

nlohmann::json AssumptionReport::to_json() const {
  nlohmann::json j;
  j["verdicts"] = {{"confinement", to_string(confinement)},
                   {"growth", to_string(growth)},
                   {"boundedness", to_string(boundedness)}};
  j["a3_sup"] = a3_sup;
  j["shells"] = nlohmann::json::array();
  for (const auto& s : shells) {
    j["shells"].push_back({{"radius", s.radius},
                           {"min_loss", s.min_loss},
                           {"max_loss", s.max_loss},
                           {"a2_growth", s.a2_growth},
                           {"a2_ratio", s.a2_ratio},
                           {"a3_value", s.a3_value},
                           {"non_finite", s.non_finite}});
  }
  j["notes"] = notes;
  return j;
}

AssumptionReport check_assumptions(const Potential& potential, const std::vector<double>& shells,
                                   int grid_resolution, AssumptionOptions options) {
  const int d = potential.dimension();
  if (shells.size() < 2) throw std::invalid_argument("need at least two shells");
  for (std::size_t i = 0; i < shells.size(); ++i) {
    if (!(shells[i] > 0.0) || (i > 0 && !(shells[i] > shells[i - 1]))) {
      throw std::invalid_argument("shell radii must be positive and increasing");
    }
  }
  if (grid_resolution < 2) throw std::invalid_argument("grid_resolution must be >= 2");
  const Vec center = options.center.size() ? options.center : Vec::Zero(d);

  AssumptionReport report;
  report.notes.push_back(
      "verdicts are sampled on finitely many shells and grid points; they are heuristics, "
      "not proofs");

  const auto dirs = shell_directions(d, std::max(options.directions, 2), options.seed);
  std::vector<double> min_loss, tail_weight, growth, ratio, a3_shell;
  for (double r : shells) {
    ShellSummary s;
    s.radius = r;
    s.min_loss = std::numeric_limits<double>::infinity();
    s.max_loss = -s.min_loss;
    s.a2_growth = std::numeric_limits<double>::infinity();
    for (const auto& u : dirs) {
      const PointTerms t = terms_at(potential, center + r * u);
      if (!std::isfinite(t.loss) || !std::isfinite(t.grad2) || !std::isfinite(t.trace)) {
        ++s.non_finite;
        continue;
      }
      s.min_loss = std::min(s.min_loss, t.loss);
      s.max_loss = std::max(s.max_loss, t.loss);
      s.a2_growth = std::min(s.a2_growth, 0.5 * t.grad2 - t.trace);
      const double q = t.grad2 > 0.0 ? std::abs(t.trace) / t.grad2
                                     : std::numeric_limits<double>::infinity();
      s.a2_ratio = std::max(s.a2_ratio, q);
      s.a3_value = std::max(s.a3_value, std::abs(std::exp(-t.loss) * (t.grad2 - t.trace)));
    }
    if (s.non_finite > 0) {
      report.notes.push_back(std::to_string(s.non_finite) + " direction(s) at radius " +
                             std::to_string(r) + " gave non-finite values and were skipped");
    }
    min_loss.push_back(s.min_loss);
    tail_weight.push_back((d - 1) * std::log(r) - s.min_loss);
    growth.push_back(s.a2_growth);
    ratio.push_back(s.a2_ratio);
    a3_shell.push_back(s.a3_value);
    report.shells.push_back(s);
  }

  const bool any_finite = std::any_of(report.shells.begin(), report.shells.end(),
                                      [&](const ShellSummary& s) { return s.non_finite < int(dirs.size()); });
  if (!any_finite) {
    report.notes.push_back("no shell produced finite values");
    return report;
  }

  // Confinement: L grows along every sampled direction and the radial mass
  // r^{d-1} e^{-min L} decays, so e^{-L} is integrable on the sampled range.
  const bool loss_grows = eventually_increasing(min_loss);
  const bool mass_decays = eventually_decreasing(tail_weight);
  report.confinement = loss_grows && mass_decays ? Verdict::Pass : Verdict::Fail;
  if (!loss_grows) report.notes.push_back("confinement: min loss on shells is not eventually increasing");
  if (loss_grows && !mass_decays) {
    report.notes.push_back("confinement: radial mass still growing at the outer shells; extend shells");
  }

  // Growth: growth term eventually increasing and the trace ratio shrinking.
  const bool growth_up = eventually_increasing(growth);
  const bool ratio_down = eventually_decreasing(ratio) && ratio.back() < 0.1;
  report.growth = growth_up && ratio_down ? Verdict::Pass : Verdict::Fail;
  if (!growth_up) report.notes.push_back("growth: |grad L|^2/2 - tr Hess L not eventually increasing");
  if (!ratio_down) report.notes.push_back("growth: tr Hess L / |grad L|^2 not shrinking toward 0");

  // Boundedness: sup over a grid of the domain plus the shells.
  const Box& box = potential.domain();
  double sup = *std::max_element(a3_shell.begin(), a3_shell.end());
  auto eval_grid_point = [&](const Vec& w) {
    const PointTerms t = terms_at(potential, w);
    const double v = std::abs(std::exp(-t.loss) * (t.grad2 - t.trace));
    if (std::isfinite(v)) sup = std::max(sup, v);
  };
  if (d <= 3) {
    const long long total = static_cast<long long>(std::pow(grid_resolution, d));
    if (total > 4'000'000) throw std::invalid_argument("assumption grid exceeds memory budget");
    Vec w(d);
    for (long long idx = 0; idx < total; ++idx) {
      long long rem = idx;
      for (int j = 0; j < d; ++j) {
        const int k = static_cast<int>(rem % grid_resolution);
        rem /= grid_resolution;
        w[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * (k + 0.5) / grid_resolution;
      }
      eval_grid_point(w);
    }
  } else {
    RandomStream rng(options.seed, 0xA53);
    const long long total = static_cast<long long>(grid_resolution) * grid_resolution;
    Vec w(d);
    for (long long idx = 0; idx < total; ++idx) {
      for (int j = 0; j < d; ++j) w[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * rng.uniform();
      eval_grid_point(w);
    }
    report.notes.push_back("boundedness: dimension > 3, domain sampled at random points instead of a grid");
  }
  report.a3_sup = sup;
  const bool outer_small = a3_shell.back() <= sup && (eventually_decreasing(a3_shell) ||
                                                      a3_shell.back() < 1e-12);
  report.boundedness = std::isfinite(sup) && outer_small ? Verdict::Pass : Verdict::Fail;
  if (report.boundedness == Verdict::Fail) {
    report.notes.push_back("boundedness: e^{-L}(|grad L|^2 - tr Hess L) not decaying on the outer shells");
  }
  return report;
}

}  // namespace sgdlab
