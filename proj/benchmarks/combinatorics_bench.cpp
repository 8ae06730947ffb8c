#include <benchmark/benchmark.h>

#include "tnm/tnm.hpp"

namespace {

void BM_BigR(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  tnm::Dims dims;
  for (std::size_t i = 0; i < k; ++i) dims.push_back(6 + 2 * i);
  const tnm::Datum datum{dims, 3};
  for (auto _ : state) benchmark::DoNotOptimize(tnm::big_r(datum));
}
BENCHMARK(BM_BigR)->DenseRange(4, 16, 4);

void BM_ClassifyGrid(benchmark::State& state) {
  const tnm::ScanBounds bounds{3, static_cast<std::uint64_t>(state.range(0)), 6};
  const auto grid = tnm::enumerate_normalized(bounds);
  for (auto _ : state) {
    std::size_t agree = 0;
    for (const auto& d : grid) agree += tnm::classify_closed_form(d) == tnm::classify_recursive(d);
    benchmark::DoNotOptimize(agree);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_ClassifyGrid)->Arg(8)->Arg(16);

void BM_Thresholds(benchmark::State& state) {
  const tnm::Dims dims{3, 7, static_cast<std::uint64_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(tnm::thresholds(dims));
}
BENCHMARK(BM_Thresholds)->Arg(20)->Arg(200)->Arg(2000);

}  // namespace
