// Serial reference vs OpenMP kernels. Arguments are point counts; the
// dimension is fixed at the toy embedding size.

#include <benchmark/benchmark.h>

#include <vector>

#include "sepph/homology.hpp"
#include "sepph/kernels.hpp"
#include "sepph/rng.hpp"

namespace {

using namespace sepph;

constexpr Eigen::Index kDim = 5;

RowMatrix points(std::int64_t n, Eigen::Index d = kDim, std::uint64_t seed = 1) {
  CounterRng rng(seed);
  RowMatrix x(n, d);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  return x;
}

template <bool Parallel>
void BM_PairwiseDistances(benchmark::State& state) {
  const auto x = points(state.range(0));
  for (auto _ : state) {
    auto dm = Parallel ? kernels::pairwise_distances(x) : kernels::serial::pairwise_distances(x);
    benchmark::DoNotOptimize(dm.data());
  }
}

template <bool Parallel>
void BM_SortedEdges(benchmark::State& state) {
  const auto dm = kernels::serial::pairwise_distances(points(state.range(0)));
  for (auto _ : state) {
    auto e = Parallel ? kernels::sorted_edges(dm) : kernels::serial::sorted_edges(dm);
    benchmark::DoNotOptimize(e.data());
  }
}

template <bool Parallel>
void BM_NearestNeighbors(benchmark::State& state) {
  const auto dm = kernels::serial::pairwise_distances(points(state.range(0)));
  for (auto _ : state) {
    auto nn = Parallel ? kernels::nearest_neighbors(dm, 5) : kernels::serial::nearest_neighbors(dm, 5);
    benchmark::DoNotOptimize(nn.data());
  }
}

template <bool Parallel>
void BM_AssignToCentroids(benchmark::State& state) {
  const auto x = points(state.range(0), 40);
  const auto c = points(5, 40, 2);
  std::vector<int> a(x.rows());
  std::vector<double> d(x.rows());
  for (auto _ : state) {
    if (Parallel)
      kernels::assign_to_centroids(x, c, a, d);
    else
      kernels::serial::assign_to_centroids(x, c, a, d);
    benchmark::DoNotOptimize(a.data());
  }
}

// End to end: distances, edge sort and union-find on one snapshot.
void BM_H0Persistence(benchmark::State& state) {
  const DistanceMatrix dm(kernels::pairwise_distances(points(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(h0_persistence(dm).finite_bars.data());
}

}  // namespace

BENCHMARK(BM_PairwiseDistances<false>)->Name("pairwise_distances/serial")->Arg(500)->Arg(1000)->Arg(2000);
BENCHMARK(BM_PairwiseDistances<true>)->Name("pairwise_distances/omp")->Arg(500)->Arg(1000)->Arg(2000)->UseRealTime();
BENCHMARK(BM_SortedEdges<false>)->Name("sorted_edges/serial")->Arg(500)->Arg(1000)->Arg(2000);
BENCHMARK(BM_SortedEdges<true>)->Name("sorted_edges/omp")->Arg(500)->Arg(1000)->Arg(2000)->UseRealTime();
BENCHMARK(BM_NearestNeighbors<false>)->Name("nearest_neighbors/serial")->Arg(500)->Arg(1000)->Arg(2000);
BENCHMARK(BM_NearestNeighbors<true>)->Name("nearest_neighbors/omp")->Arg(500)->Arg(1000)->Arg(2000)->UseRealTime();
BENCHMARK(BM_AssignToCentroids<false>)->Name("assign_to_centroids/serial")->Arg(2000)->Arg(20000);
BENCHMARK(BM_AssignToCentroids<true>)->Name("assign_to_centroids/omp")->Arg(2000)->Arg(20000)->UseRealTime();
BENCHMARK(BM_H0Persistence)->Name("h0_persistence")->Arg(1000)->Arg(2000)->UseRealTime();

BENCHMARK_MAIN();
