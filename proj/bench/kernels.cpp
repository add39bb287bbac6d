// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "bbohub/benchmarks/bbob.hpp"
#include "bbohub/core/random.hpp"
#include "bbohub/samplers/pareto.hpp"

namespace {

using namespace bbohub;

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t m, double low, double high) {
  Rng rng(n * 131 + m);
  std::vector<std::vector<double>> pts(n, std::vector<double>(m));
  for (auto &p : pts) {
    for (auto &v : p) v = rng.uniform(low, high);
  }
  return pts;
}

template <bool Parallel>
void BM_NonDominatedSort(benchmark::State &state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 3, 0.0, 1.0);
  const std::vector<Direction> dirs(3, Direction::minimize);
  for (auto _ : state) {
    auto fronts = Parallel ? samplers::non_dominated_sort(pts, dirs) : samplers::non_dominated_sort_serial(pts, dirs);
    benchmark::DoNotOptimize(fronts);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_EvaluateBatch(benchmark::State &state) {
  const benchmarks::BbobFunction f({8, 10, 3});
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 10, -5.0, 5.0);
  for (auto _ : state) {
    auto values = Parallel ? benchmarks::evaluate_batch(f, pts) : benchmarks::evaluate_batch_serial(f, pts);
    benchmark::DoNotOptimize(values);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_NonDominatedSort<true>)->Name("nds/parallel")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_NonDominatedSort<false>)->Name("nds/serial")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_EvaluateBatch<true>)->Name("bbob_batch/parallel")->RangeMultiplier(8)->Range(512, 1 << 18);
BENCHMARK(BM_EvaluateBatch<false>)->Name("bbob_batch/serial")->RangeMultiplier(8)->Range(512, 1 << 18);

BENCHMARK_MAIN();
