#include <benchmark/benchmark.h>

#include <random>

#include "cheb/global.hpp"
#include "cheb/impeq.hpp"
#include "cheb/oracle.hpp"
#include "cheb/presets.hpp"
#include "cheb/sdp.hpp"

namespace {

cheb::Matrix random_symmetric(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  cheb::Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gauss(rng);
  return cheb::Matrix(0.5 * (a + a.transpose()));
}

void BM_EigSym(benchmark::State& state) {
  const cheb::SymMatrix a(random_symmetric(state.range(0), 11));
  for (auto _ : state) benchmark::DoNotOptimize(cheb::eig_sym(a));
}
BENCHMARK(BM_EigSym)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_SolveLub(benchmark::State& state) {
  const cheb::ProblemInstance inst =
      cheb::random_specific(state.range(0), state.range(0) / 2, 23);
  for (auto _ : state) benchmark::DoNotOptimize(cheb::solve_lub(inst));
}
BENCHMARK(BM_SolveLub)->Arg(4)->Arg(8);

void BM_SolveImpeq(benchmark::State& state) {
  const cheb::ProblemInstance inst =
      cheb::random_specific(state.range(0), state.range(0) / 2, 29);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(cheb::solve_impeq(inst));
    } catch (const cheb::SolverError&) {
      state.SkipWithError("instance fell back to the relaxation route");
      break;
    }
  }
}
BENCHMARK(BM_SolveImpeq)->Arg(4)->Arg(8);

void BM_SampleFeasible(benchmark::State& state) {
  const cheb::ProblemInstance inst = cheb::rec2();
  const auto count = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(cheb::sample_feasible(inst, count, 5));
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_SampleFeasible)->Arg(1024)->Arg(16384);

void BM_GwceEstimate(benchmark::State& state) {
  const cheb::ProblemInstance inst = cheb::rec1();
  const cheb::GlobalMap map = cheb::solve_global(inst);
  for (auto _ : state)
    benchmark::DoNotOptimize(cheb::gwce_estimate(inst, map.map, 2048, 3));
}
BENCHMARK(BM_GwceEstimate);

}  // namespace

BENCHMARK_MAIN();
