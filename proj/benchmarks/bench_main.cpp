#include <benchmark/benchmark.h>

#include "entrocode/coding.hpp"
#include "entrocode/entropy.hpp"
#include "entrocode/schemes.hpp"

using namespace entrocode;

namespace {

void BM_GreedySeparated(benchmark::State& st) {
  const SystemSpec cat = library_system("cat_map");
  const auto region = sample_initial(
      cat, {MeasureKind::kLebesgue, 0, static_cast<int>(st.range(0)), 7});
  for (auto _ : st) {
    benchmark::DoNotOptimize(greedy_separated(cat, region, 4, 1.0 / 16).size());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_GreedySeparated)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_CylinderTable(benchmark::State& st) {
  const SystemSpec d = library_system("doubling");
  const auto s = sample_initial(d, {MeasureKind::kGrid, 0, 1 << 17, std::nullopt});
  const Partition p = grid_partition(d.space, 2);
  for (auto _ : st) {
    CylinderTable table(d, s, p, static_cast<int>(st.range(0)));
    benchmark::DoNotOptimize(table.depth());
  }
}
BENCHMARK(BM_CylinderTable)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ZoomEnsemble(benchmark::State& st) {
  const SystemSpec cat = library_system("cat_map");
  const CodingScheme zoom = build_zoom_coder(cat, Channel::with_alphabet(3), 0.05, 400);
  const auto init = sample_initial(cat, {MeasureKind::kLebesgue, 0, 1000, 3});
  for (auto _ : st) {
    benchmark::DoNotOptimize(run_ensemble(cat, init.points, zoom, 400).size());
  }
}
BENCHMARK(BM_ZoomEnsemble)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
