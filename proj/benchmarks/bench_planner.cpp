#include <benchmark/benchmark.h>

#include "crowdflow/invasiveness.hpp"
#include "crowdflow/oracle.hpp"
#include "crowdflow/roadmap.hpp"
#include "crowdflow/scenarios.hpp"

namespace {

using namespace crowdflow;

void BM_EdgeCost(benchmark::State& state) {
  const Scenario s = concert_hall();
  const Vec2 a{6.0, 15.0};
  const Vec2 b{6.0 + static_cast<double>(state.range(0)), 17.0};
  for (auto _ : state) benchmark::DoNotOptimize(edge_cost(s.flow, a, b, s.environment.limits));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EdgeCost)->Arg(1)->Arg(4)->Arg(16);

void BM_BuildRoadmap(benchmark::State& state) {
  const Scenario s = density_scenario();
  BuildOptions o = s.build_options();
  o.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_roadmap(s.environment, s.flow, s.start, s.goal, o));
}
BENCHMARK(BM_BuildRoadmap)->Arg(500)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_NeighborSearch(benchmark::State& state) {
  const Scenario s = concert_hall();
  BuildOptions o = s.build_options();
  o.samples = 4000;
  o.search = state.range(0) == 0 ? NeighborSearch::BruteForce : NeighborSearch::Grid;
  const CrowdFlow empty = CrowdFlow::uniform(s.flow.bounds(), 0.0, {}, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_roadmap(s.environment, empty, s.start, s.goal, o));
  state.SetLabel(state.range(0) == 0 ? "brute-force" : "grid");
}
BENCHMARK(BM_NeighborSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Dijkstra(benchmark::State& state) {
  const Scenario s = velocity_scenario();
  BuildOptions o = s.build_options();
  o.samples = static_cast<std::size_t>(state.range(0));
  const Roadmap rm = build_roadmap(s.environment, s.flow, s.start, s.goal, o);
  for (auto _ : state) benchmark::DoNotOptimize(dijkstra(rm, kStartNode, EdgeWeight::Invasiveness));
  state.counters["edges"] = static_cast<double>(rm.edge_count());
}
BENCHMARK(BM_Dijkstra)->Arg(2000)->Arg(8000)->Unit(benchmark::kMicrosecond);

void BM_LatticePlan(benchmark::State& state) {
  const Scenario s = density_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(lattice_plan(s, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_LatticePlan)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
