#include "factorcp/critvals.hpp"
#include "factorcp/dgp.hpp"
#include "factorcp/loading.hpp"
#include "factorcp/objective_kernels.hpp"
#include "factorcp/rng.hpp"
#include "factorcp/subspace.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

struct ObjectiveInput {
  fcp::TimeSeriesPanel panel;
  std::vector<Eigen::Index> splits;
  fcp::SubspaceBasis b1;
  fcp::SubspaceBasis b2;
};

ObjectiveInput objective_input(Eigen::Index n, Eigen::Index p) {
  fcp::DgpSpec spec;
  spec.n = n;
  spec.p = p;
  spec.seed = 7;
  auto sim = fcp::generate(spec);
  auto b1 = fcp::orthogonal_complement(fcp::SubspaceBasis::span_of(sim.truth.a1));
  auto b2 = fcp::orthogonal_complement(fcp::SubspaceBasis::span_of(sim.truth.a2));
  auto splits = fcp::FractionGrid(0.1, 0.9).candidates(n);
  return {std::move(sim.panel), std::move(splits), std::move(b1), std::move(b2)};
}

void BM_ObjectiveReference(benchmark::State& state) {
  const auto in = objective_input(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fcp::objective_trace_reference(in.panel, in.splits, in.b1, in.b2, 1));
  }
}
BENCHMARK(BM_ObjectiveReference)->Args({200, 20})->Args({400, 20})->Unit(benchmark::kMillisecond);

void BM_ObjectiveParallel(benchmark::State& state) {
  const auto in = objective_input(state.range(0), state.range(1));
  const int threads = static_cast<int>(state.range(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fcp::objective_trace_parallel(in.panel, in.splits, in.b1, in.b2, 1, threads));
  }
}
BENCHMARK(BM_ObjectiveParallel)
    ->Args({200, 20, 1})
    ->Args({400, 20, 1})
    ->Args({400, 20, 0})
    ->Args({1000, 100, 1})
    ->Args({1000, 100, 0})
    ->Unit(benchmark::kMillisecond);

std::vector<double> brownian_path(int grid) {
  fcp::PhiloxStream stream(3, 0);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(grid)));
  std::vector<double> path(static_cast<std::size_t>(grid) + 1, 0.0);
  for (std::size_t j = 1; j < path.size(); ++j) path[j] = path[j - 1] + normal(stream);
  return path;
}

void BM_LimitFunctional(benchmark::State& state) {
  const auto path = brownian_path(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fcp::limit_functional(path, 0.1, 0.9));
}
BENCHMARK(BM_LimitFunctional)->Arg(500)->Arg(2000);

void BM_LimitFunctionalReference(benchmark::State& state) {
  const auto path = brownian_path(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fcp::limit_functional_reference(path, 0.1, 0.9));
}
BENCHMARK(BM_LimitFunctionalReference)->Arg(500)->Arg(2000);

// threads == 0: OpenMP default
void BM_SimulateCriticalValues(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fcp::simulate_critical_values(0.1, 0.9, 2000, 5000, fcp::kDefaultCvSeed, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_SimulateCriticalValues)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
