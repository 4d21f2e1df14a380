#include <benchmark/benchmark.h>

#include "lowtw/elimination.hpp"
#include "lowtw/matching.hpp"
#include "lowtw/splitting.hpp"
#include "lowtw/tw_approx.hpp"
#include "lowtw/vertex_flow.hpp"
#include "support.hpp"

using namespace lowtw;
using namespace lowtw::testing;

// Arguments are (n, width) throughout.

static void BM_PathElimination(benchmark::State& state) {
  Rng rng(1);
  PrimeField f(kLargePrime);
  const Index n = static_cast<Index>(state.range(0));
  auto x = random_path_matrix(f, n / 2, n / 2, static_cast<int>(state.range(1)), 0.6, rng);
  auto so = ordering_from_path_decomp(x.m, x.pd);
  for (auto _ : state) benchmark::DoNotOptimize(pluq(guided_elimination(x.m, so)).rank);
}
BENCHMARK(BM_PathElimination)
    ->ArgsProduct({{5000, 10000, 20000, 40000}, {2, 6}})
    ->Unit(benchmark::kMillisecond);

static void BM_TpdElimination(benchmark::State& state) {
  Rng rng(2);
  RationalField q;
  const Index n = static_cast<Index>(state.range(0));
  auto x = random_tpd_matrix(q, n / 2, n / 2, static_cast<int>(state.range(1)), 0.4, rng);
  auto so = ordering_from_tpd(x.m, x.tpd);
  for (auto _ : state) benchmark::DoNotOptimize(pluq(guided_elimination(x.m, so)).rank);
}
BENCHMARK(BM_TpdElimination)->ArgsProduct({{1000, 4000}, {2, 4}})->Unit(benchmark::kMillisecond);

static void BM_TreewidthRankDet(benchmark::State& state) {
  Rng rng(3);
  PrimeField f(kLargePrime);
  const Index n = static_cast<Index>(state.range(0));
  auto x = random_tw_matrix(f, n, n, static_cast<int>(state.range(1)), 0.7, rng);
  for (auto _ : state) benchmark::DoNotOptimize(tw_rank_det_solve(x.m, x.td).rank);
}
BENCHMARK(BM_TreewidthRankDet)->ArgsProduct({{1000, 4000, 16000}, {2, 4}})->Unit(benchmark::kMillisecond);

static void BM_MatchingSize(benchmark::State& state) {
  Rng rng(4);
  auto [g, td] = random_partial_ktree(static_cast<Vertex>(state.range(0)), static_cast<int>(state.range(1)), 0.6, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(matching_size(g, td, 1, ++seed));
}
BENCHMARK(BM_MatchingSize)->ArgsProduct({{1000, 4000}, {2, 4}})->Unit(benchmark::kMillisecond);

static void BM_MaxMatching(benchmark::State& state) {
  Rng rng(5);
  auto [g, td] = random_partial_ktree(static_cast<Vertex>(state.range(0)), static_cast<int>(state.range(1)), 0.6, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(max_matching(g, td, 1, ++seed));
}
BENCHMARK(BM_MaxMatching)->ArgsProduct({{200, 800}, {2}})->Unit(benchmark::kMillisecond);

static void BM_MaxVertexFlow(benchmark::State& state) {
  Rng rng(6);
  const Vertex n = static_cast<Vertex>(state.range(0));
  auto x = random_directed_ktree(n, static_cast<int>(state.range(1)), 0.8, rng);
  Vertex t = n - 1;
  while (x.g.has_arc(0, t)) --t;
  for (auto _ : state) benchmark::DoNotOptimize(max_vertex_flow_td(x.g, 0, t, x.td).cut.vertices.size());
}
BENCHMARK(BM_MaxVertexFlow)->ArgsProduct({{10000, 40000}, {2, 6}})->Unit(benchmark::kMillisecond);

static void BM_ApproximateTreewidth(benchmark::State& state) {
  Rng rng(7);
  auto [g, td] = random_partial_ktree(static_cast<Vertex>(state.range(0)), static_cast<int>(state.range(1)), 1.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(approximate_treewidth(g, static_cast<int>(state.range(1))).stats.nodes);
}
BENCHMARK(BM_ApproximateTreewidth)->ArgsProduct({{2000, 8000}, {1, 2}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
