#include <benchmark/benchmark.h>

#include <vector>

#include "scatsyn/grids.hpp"
#include "scatsyn/kernels.hpp"

using namespace scatsyn;

namespace {

Execution exec_of(const benchmark::State& s) {
  return s.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

std::vector<cplx> ramp(std::size_t n) {
  std::vector<cplx> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = cplx(1.0 + 1e-3 * j, -0.5 + 2e-4 * j);
  return x;
}

void BM_KernelRows(benchmark::State& state) {
  const auto grid = build_ball_grid(12, 8);
  const std::size_t n = grid->size();
  std::vector<cplx> out(n * n);
  for (auto _ : state) {
    kernels::kernel_rows(*grid, 1.0, SelfCellRule::Subtraction, 0, n, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}

void BM_AzimuthalApply(benchmark::State& state) {
  const auto grid = build_ball_grid(24, 16);
  const auto blocks = kernels::azimuthal_blocks(*grid, 1.0, SelfCellRule::Subtraction, Execution::Parallel);
  const auto x = ramp(grid->size());
  std::vector<cplx> y(grid->size());
  for (auto _ : state) {
    kernels::azimuthal_apply(*grid, blocks, x, y, exec_of(state));
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_FarField(benchmark::State& state) {
  const auto grid = build_ball_grid(24, 16);
  const auto dirs = build_sphere_grid(16);
  const auto rho = ramp(grid->size());
  std::vector<cplx> out(dirs->size());
  for (auto _ : state) {
    kernels::far_field(*grid, rho, 1.0, dirs->nodes, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

// Argument 0 is the serial reference, 1 the OpenMP kernel.
BENCHMARK(BM_KernelRows)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AzimuthalApply)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FarField)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
