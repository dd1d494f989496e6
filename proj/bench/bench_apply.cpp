#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "expsamp/operators.hpp"

using namespace expsamp;

namespace {

std::vector<double> grid(int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = 0.5 * std::pow(8.0, static_cast<double>(i) / (n - 1));
  return xs;
}

OperatorParams params_for(const Kernel& k, double w) {
  OperatorParams p = default_params(k, w);
  if (!k.is_bspline()) p.truncation = WindowTerms{2000};
  return p;
}

void apply_grid(benchmark::State& state, bool parallel, Kernel kernel, double w) {
  const auto sig = signals::f2_extended();
  const auto xs = grid(static_cast<int>(state.range(0)));
  const auto p = params_for(kernel, w);
  for (auto _ : state) {
    auto out = parallel ? apply_on_grid(kernel, sig, p, xs) : apply_on_grid_serial(kernel, sig, p, xs);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void parallel_grid(benchmark::State& state, Kernel kernel, double w) { apply_grid(state, true, kernel, w); }
void serial_grid(benchmark::State& state, Kernel kernel, double w) { apply_grid(state, false, kernel, w); }

}  // namespace

BENCHMARK_CAPTURE(parallel_grid, bspline3_parallel, Kernel::bspline(3), 40.0)->Arg(512)->Arg(4096);
BENCHMARK_CAPTURE(serial_grid, bspline3_serial, Kernel::bspline(3), 40.0)->Arg(512)->Arg(4096);
BENCHMARK_CAPTURE(parallel_grid, fejer_parallel, Kernel::fejer(3.141592653589793, 0.0), 40.0)->Arg(512);
BENCHMARK_CAPTURE(serial_grid, fejer_serial, Kernel::fejer(3.141592653589793, 0.0), 40.0)->Arg(512);

BENCHMARK_MAIN();
