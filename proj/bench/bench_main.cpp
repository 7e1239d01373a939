#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "aderdg/driver.hpp"
#include "aderdg/kernels.hpp"

using namespace aderdg;

namespace {

RunConfig vortex(int order, int cells, Execution execution, EvalMode kernel) {
  RunConfig c;
  c.system = "euler";
  c.dim = 2;
  c.order = order;
  c.cells = {cells, cells, 1};
  c.domain_min = {0, 0, 0};
  c.domain_max = {10, 10, 1};
  c.cfl = 0.05;
  c.ic.name = "vortex";
  c.limiter = false;
  c.execution = execution;
  c.kernel = kernel;
  return c;
}

void step(benchmark::State& state, Execution execution, EvalMode kernel) {
  const int order = static_cast<int>(state.range(0));
  Simulation sim(vortex(order, 16, execution, kernel));
  auto& s = sim.solver();
  const double dt = s.compute_dt();
  for (auto _ : state) s.step(dt);
  // Items are degree-of-freedom updates, so items/s is the inverse TDU.
  state.SetItemsProcessed(state.iterations() * s.mesh().num_cells() * s.layout().nsp);
}

void BM_StepSerial(benchmark::State& state) { step(state, Execution::kSerial, EvalMode::kBatched); }
void BM_StepParallel(benchmark::State& state) { step(state, Execution::kParallel, EvalMode::kBatched); }
void BM_StepScalarKernel(benchmark::State& state) { step(state, Execution::kSerial, EvalMode::kScalar); }

void flux(benchmark::State& state, EvalMode mode) {
  EulerSystem sys(3, 1.4);
  const int m = sys.num_vars(), npts = 4096;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> rho(0.5, 2.0), vel(-1.0, 1.0);
  std::vector<double> q(static_cast<std::size_t>(npts) * m), f(q.size());
  for (int p = 0; p < npts; ++p) {
    std::vector<double> v{rho(rng), vel(rng), vel(rng), vel(rng), rho(rng)}, c(m);
    sys.prim2cons(v, c);
    std::copy(c.begin(), c.end(), q.begin() + static_cast<std::ptrdiff_t>(p) * m);
  }
  BatchEvaluator eval(sys, static_cast<int>(state.range(0)), mode);
  for (auto _ : state) {
    for (int d = 0; d < 3; ++d) eval.flux(q.data(), npts, d, f.data());
    benchmark::DoNotOptimize(f.data());
  }
  state.SetItemsProcessed(state.iterations() * npts * 3);
}

void BM_FluxBatched(benchmark::State& state) { flux(state, EvalMode::kBatched); }
void BM_FluxScalar(benchmark::State& state) { flux(state, EvalMode::kScalar); }

}  // namespace

BENCHMARK(BM_StepSerial)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StepParallel)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StepScalarKernel)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FluxBatched)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_FluxScalar)->Arg(8);

BENCHMARK_MAIN();
