// Serial reference vs OpenMP kernels on random connected graphs.
#include <benchmark/benchmark.h>

#include <random>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"
#include "ricci/oracles/oracles.hpp"

namespace {

ricci::WeightedGraph make_graph(int n) {
  std::mt19937_64 rng(12345);
  return ricci::oracles::random_connected_graph(n, 4.0 / n, rng);
}

void BM_Distances_Serial(benchmark::State& state) {
  const auto g = make_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ricci::all_pairs_distances_serial(g));
}

void BM_Distances_Parallel(benchmark::State& state) {
  const auto g = make_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ricci::all_pairs_distances(g));
}

void BM_Curvatures_Serial(benchmark::State& state) {
  const auto g = make_graph(static_cast<int>(state.range(0)));
  const auto dm = ricci::all_pairs_distances_serial(g);
  const auto gamma = ricci::Gamma::reciprocal();
  for (auto _ : state) benchmark::DoNotOptimize(ricci::edge_curvatures_serial(g, dm, gamma, false));
}

void BM_Curvatures_Parallel(benchmark::State& state) {
  const auto g = make_graph(static_cast<int>(state.range(0)));
  const auto dm = ricci::all_pairs_distances(g);
  const auto gamma = ricci::Gamma::reciprocal();
  for (auto _ : state) benchmark::DoNotOptimize(ricci::edge_curvatures(g, dm, gamma, false));
}

}  // namespace

BENCHMARK(BM_Distances_Serial)->Arg(64)->Arg(256);
BENCHMARK(BM_Distances_Parallel)->Arg(64)->Arg(256);
BENCHMARK(BM_Curvatures_Serial)->Arg(16)->Arg(64);
BENCHMARK(BM_Curvatures_Parallel)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
