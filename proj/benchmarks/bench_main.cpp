#include <benchmark/benchmark.h>

#include <vector>

#include "loopzeta/gff_field.hpp"
#include "loopzeta/graph_loops.hpp"
#include "loopzeta/heat_trace.hpp"
#include "loopzeta/lattice_bridge.hpp"
#include "loopzeta/subdivision.hpp"
#include "loopzeta/zeta_det.hpp"

using namespace loopzeta;

namespace {

Graph dirichlet_grid(int m) {
  // m x m interior with a boundary ring.
  const int side = m + 2;
  std::vector<Edge> edges;
  std::vector<int> boundary;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const int v = r * side + c;
      if (r == 0 || c == 0 || r == side - 1 || c == side - 1) boundary.push_back(v);
      if (c + 1 < side && r > 0 && r < side - 1) edges.push_back({v, v + 1});
      if (r + 1 < side && c > 0 && c < side - 1) edges.push_back({v, v + side});
    }
  }
  return Graph(side * side, std::move(edges), std::move(boundary));
}

void BM_TorusHeatTrace(benchmark::State& state) {
  const HeatTraceEngine engine(FlatTorus{1.0, 2.0});
  double t = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.trace(t));
    t = t < 1.0 ? t * 1.1 : 1e-3;
  }
}
BENCHMARK(BM_TorusHeatTrace);

void BM_LogDetZeta(benchmark::State& state) {
  const HeatTraceEngine engine(FlatTorus{1.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(log_det_zeta(engine, 0.1).log_det);
}
BENCHMARK(BM_LogDetZeta)->Unit(benchmark::kMillisecond);

void BM_LoopMassExact(benchmark::State& state) {
  const Graph g = dirichlet_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(loop_mass_exact(g));
}
BENCHMARK(BM_LoopMassExact)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_TorusLatticeLogDet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(torus_log_det_prime(n, n));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_TorusLatticeLogDet)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SampleDgff(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_dgff(size, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_SampleDgff)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_Subdivide(benchmark::State& state) {
  const GridField field = sample_dgff(256, 7);
  const double q = charge_to_params(0.0).Q;
  const double eps = 1e-3 * quantum_size(field, q, {});
  for (auto _ : state) benchmark::DoNotOptimize(subdivide(field, q, eps).squares.size());
}
BENCHMARK(BM_Subdivide)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
