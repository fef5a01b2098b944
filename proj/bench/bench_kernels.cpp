#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "iterem/kernels.hpp"
#include "iterem/solver_continuous.hpp"

using namespace iterem;
using namespace iterem::kernels;

namespace {

std::vector<double> power_sequence(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = std::pow(double(j + 1), -4.0);
  return x;
}

void direct(benchmark::State& state, Execution exec) {
  const auto x = power_sequence(static_cast<std::size_t>(state.range(0)));
  const int order = static_cast<int>(state.range(1));
  std::vector<double> out(x.size());
  for (auto _ : state) {
    remainder_direct(x, order, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_DirectSerial(benchmark::State& state) { direct(state, Execution::serial); }
void BM_DirectParallel(benchmark::State& state) { direct(state, Execution::parallel); }

void BM_Suffix(benchmark::State& state) {
  const auto x = power_sequence(static_cast<std::size_t>(state.range(0)));
  const int order = static_cast<int>(state.range(1));
  std::vector<double> out(x.size());
  for (auto _ : state) {
    remainder_suffix(x, order, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void grid(benchmark::State& state, Execution exec) {
  const auto g = make_grid(0.0, GridSpec{40.0 / double(state.range(0)), 0.0, 40.0});
  const PanelRule rule = gauss_kronrod_panels(g);
  std::vector<double> values(rule.nodes.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::exp(-rule.nodes[i]);
  std::vector<double> out(g.size());
  std::vector<double> err(g.size());
  for (auto _ : state) {
    grid_remainder(g, rule, values, static_cast<int>(state.range(1)), out, err, exec);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["grid_points"] = double(g.size());
}

void BM_GridSerial(benchmark::State& state) { grid(state, Execution::serial); }
void BM_GridParallel(benchmark::State& state) { grid(state, Execution::parallel); }

}  // namespace

BENCHMARK(BM_DirectSerial)->ArgsProduct({{1 << 10, 1 << 12, 1 << 14}, {1, 3}});
BENCHMARK(BM_DirectParallel)->ArgsProduct({{1 << 10, 1 << 12, 1 << 14}, {1, 3}})->UseRealTime();
BENCHMARK(BM_Suffix)->ArgsProduct({{1 << 10, 1 << 12, 1 << 14}, {1, 3}});
BENCHMARK(BM_GridSerial)->ArgsProduct({{100, 400, 1600}, {1, 2}});
BENCHMARK(BM_GridParallel)->ArgsProduct({{100, 400, 1600}, {1, 2}})->UseRealTime();

BENCHMARK_MAIN();
