// Planning throughput benchmarks over the shipped fixtures. These track the
// hot paths behind the batch tools: composing a construed task, solving it,
// enumerating the whole construal lattice, and solving the switching process.

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "construal/construed_task.hpp"
#include "construal/grid_maze.hpp"
#include "construal/heuristic_search.hpp"
#include "construal/meta.hpp"
#include "construal/solvers.hpp"
#include "construal/vor.hpp"

namespace {

construal::GridMaze load(const std::string& name) {
  std::ifstream in(std::string(FIXTURES_DIR) + "/" + name + ".maze", std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return construal::parse_maze(ss.str());
}

void BM_ComposeConstruedTask(benchmark::State& state) {
  const construal::GridMaze m = load("crit-0");
  const construal::ConstrualMask mask = static_cast<construal::ConstrualMask>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(construal::compose_construed_mdp(m, mask));
  }
}
BENCHMARK(BM_ComposeConstruedTask)->Arg(0)->Arg(0x7f);

void BM_ValueIteration(benchmark::State& state) {
  const construal::TabularMdp mdp = construal::full_mdp(load("crit-0"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(construal::value_iteration(mdp));
  }
}
BENCHMARK(BM_ValueIteration)->Unit(benchmark::kMillisecond);

void BM_VorTableSmall(benchmark::State& state) {
  const construal::GridMaze m = load("routes5");
  for (auto _ : state) {
    benchmark::DoNotOptimize(construal::vor_table(m));
  }
}
BENCHMARK(BM_VorTableSmall)->Unit(benchmark::kMillisecond);

void BM_VorTableFullLattice(benchmark::State& state) {
  const construal::GridMaze m = load("crit-0");
  for (auto _ : state) {
    benchmark::DoNotOptimize(construal::vor_table(m));
  }
}
BENCHMARK(BM_VorTableFullLattice)->Unit(benchmark::kSecond)->Iterations(1);

void BM_MetaSolveSmall(benchmark::State& state) {
  const construal::MetaMdp meta = construal::build_meta_mdp(load("tiny-ob"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(construal::solve_meta(meta));
  }
}
BENCHMARK(BM_MetaSolveSmall)->Unit(benchmark::kMillisecond);

void BM_MetaBuildAndSolveFullLattice(benchmark::State& state) {
  const construal::GridMaze m = load("crit-0");
  for (auto _ : state) {
    const construal::MetaMdp meta = construal::build_meta_mdp(m);
    benchmark::DoNotOptimize(construal::solve_meta(meta));
  }
}
BENCHMARK(BM_MetaBuildAndSolveFullLattice)->Unit(benchmark::kSecond)->Iterations(1);

void BM_Lrtdp(benchmark::State& state) {
  const construal::GridMaze m = load("crit-0");
  const construal::TabularMdp mdp = construal::full_mdp(m);
  const construal::ValueFunction h = construal::walls_only_heuristic(m);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(construal::lrtdp(mdp, h, m.start, 1e-9, seed++));
  }
}
BENCHMARK(BM_Lrtdp)->Unit(benchmark::kMillisecond);

void BM_ExactOccupancy(benchmark::State& state) {
  const construal::MetaMdp meta = construal::build_meta_mdp(load("routes5"));
  const construal::MetaSolveResult solved = construal::solve_meta(meta);
  const construal::Policy swpi = construal::construal_switch_policy(meta, solved);
  for (auto _ : state) {
    benchmark::DoNotOptimize(construal::meta_occupancy_exact(meta, swpi));
  }
}
BENCHMARK(BM_ExactOccupancy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
