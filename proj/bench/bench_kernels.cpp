// Serial reference vs OpenMP kernels. Second argument of the parallel
// benchmarks is the worker count.

#include <benchmark/benchmark.h>

#include <vector>

#include "sgdlab/fokker_planck/grid.hpp"
#include "sgdlab/kernels/ensemble.hpp"
#include "sgdlab/kernels/fp_flux.hpp"
#include "sgdlab/landscape/families.hpp"

using namespace sgdlab;

namespace {

const LandscapeWithCatalog& double_well() {
  static const auto lc = make_double_well(0.25);
  return lc;
}

kernels::FirstPassageProblem passage_problem() {
  const auto& [land, cat] = double_well();
  kernels::FirstPassageProblem p;
  p.landscape = &land;
  p.start = cat.minima[0].location;
  p.target = cat.minima[1].location;
  p.radius = 0.1;
  p.ratio = 0.25;  // eta = 8
  p.dt = 0.05;
  p.t_max = 500.0;
  p.seed = 1;
  return p;
}

kernels::OccupationProblem occupation_problem() {
  const auto& [land, cat] = double_well();
  kernels::OccupationProblem p;
  p.landscape = &land;
  p.start = cat.minima[0].location;
  p.centers = {cat.minima[0].location, cat.minima[1].location};
  p.radius = 0.5;
  p.ratio = 0.25;
  p.dt = 0.05;
  p.t_burn = 50.0;
  p.t_total = 2000.0;
  p.seed = 2;
  return p;
}

kernels::FaceCoefficients plane_coefficients(int n) {
  const auto g = GridSpec::plane(-3, 3, n, -3, 3, n);
  std::vector<double> loss(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec w = g.point(i);
    loss[i] = 0.25 * (w[0] * w[0] - 1) * (w[0] * w[0] - 1) + 0.5 * w[1] * w[1];
  }
  return kernels::build_face_coefficients(g, loss, std::vector<double>(g.size(), 0.2));
}

void BM_FirstPassageSerial(benchmark::State& state) {
  const auto p = passage_problem();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::first_passage_serial(p, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FirstPassageParallel(benchmark::State& state) {
  const auto p = passage_problem();
  const auto n = static_cast<std::size_t>(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::first_passage_parallel(p, n, workers));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_OccupationSerial(benchmark::State& state) {
  const auto p = occupation_problem();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::occupation_serial(p, n));
}

void BM_OccupationParallel(benchmark::State& state) {
  const auto p = occupation_problem();
  const auto n = static_cast<std::size_t>(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::occupation_parallel(p, n, workers));
}

void BM_ExplicitStepSerial(benchmark::State& state) {
  const auto c = plane_coefficients(static_cast<int>(state.range(0)));
  const auto p = DensityField::gaussian(c.grid, Vec::Zero(2), 4.0).values;
  std::vector<double> out;
  const double dt = 0.5 * c.explicit_bound();
  for (auto _ : state) {
    kernels::explicit_step_serial(c, p, out, dt);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.size()));
}

void BM_ExplicitStepParallel(benchmark::State& state) {
  const auto c = plane_coefficients(static_cast<int>(state.range(0)));
  const auto p = DensityField::gaussian(c.grid, Vec::Zero(2), 4.0).values;
  std::vector<double> out;
  const double dt = 0.5 * c.explicit_bound();
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    kernels::explicit_step_parallel(c, p, out, dt, workers);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.size()));
}

}  // namespace

BENCHMARK(BM_FirstPassageSerial)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FirstPassageParallel)->Args({256, 1})->Args({256, 2})->Args({256, 4})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OccupationSerial)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OccupationParallel)->Args({8, 1})->Args({8, 2})->Args({8, 4})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExplicitStepSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_ExplicitStepParallel)->Args({256, 1})->Args({256, 2})->Args({512, 2})->Args({512, 4})->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
