// Microbenchmarks for the hot paths: spectral transforms and derivatives,
// residual assembly, linearized-operator application, and a small end-to-end
// continuation solve.  Run with --benchmark_min_time=... to tighten timings.

#include <benchmark/benchmark.h>

#include <sstream>
#include <vector>

#include "qma/equations.hpp"
#include "qma/solver.hpp"
#include "qma/spectral.hpp"
#include "qma/verify.hpp"

namespace {

using namespace qma;

ScalarField state(const PeriodicGrid& g, double amp) {
  std::ostringstream spec;
  spec << "random(2," << amp << ",42)";
  return seed_from_spec(g, spec.str());
}

PeriodicGrid grid_for(Variant v, int n) {
  return PeriodicGrid(std::vector<int>(ReducedEquation::make(v).base_dim(), n));
}

void BM_ForwardInverse(benchmark::State& st) {
  PeriodicGrid g(std::vector<int>(5, static_cast<int>(st.range(0))));
  ScalarField f = state(g, 0.5);
  for (auto _ : st) {
    ScalarField out = inverse(forward(f));
    benchmark::DoNotOptimize(out.values().data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_ForwardInverse)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_SecondPartial(benchmark::State& st) {
  PeriodicGrid g(std::vector<int>(5, static_cast<int>(st.range(0))));
  ScalarField f = state(g, 0.5);
  for (auto _ : st) {
    ScalarField out = second_partial(f, 1, 3);
    benchmark::DoNotOptimize(out.values().data());
  }
}
BENCHMARK(BM_SecondPartial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ResidualAssembly(benchmark::State& st) {
  const Variant v = static_cast<Variant>(st.range(0));
  const auto& eq = ReducedEquation::make(v);
  PeriodicGrid g = grid_for(v, 8);
  ScalarField phi = state(g, 0.01);
  ScalarField F{g};
  for (auto _ : st) {
    ScalarField r = residual(eq, phi, F);
    benchmark::DoNotOptimize(r.values().data());
  }
}
BENCHMARK(BM_ResidualAssembly)
    ->Arg(static_cast<int>(Variant::T5))
    ->Arg(static_cast<int>(Variant::T6))
    ->Arg(static_cast<int>(Variant::T7))
    ->Unit(benchmark::kMillisecond);

void BM_LinearizedApply(benchmark::State& st) {
  const Variant v = static_cast<Variant>(st.range(0));
  const auto& eq = ReducedEquation::make(v);
  PeriodicGrid g = grid_for(v, 8);
  ScalarField phi = state(g, 0.01);
  LinearizedOperator L(eq, assemble(eq, phi));
  ScalarField u = state(g, 1.0);
  for (auto _ : st) {
    ScalarField out = L.apply(u);
    benchmark::DoNotOptimize(out.values().data());
  }
}
BENCHMARK(BM_LinearizedApply)
    ->Arg(static_cast<int>(Variant::T5))
    ->Arg(static_cast<int>(Variant::T6))
    ->Arg(static_cast<int>(Variant::T7))
    ->Unit(benchmark::kMillisecond);

void BM_SmallSolve(benchmark::State& st) {
  const auto& eq = ReducedEquation::make(Variant::T5);
  PeriodicGrid g(std::vector<int>(5, 8));
  ManufacturedProblem mp = manufacture(eq, state(g, 0.02));
  SolveOptions opts;
  opts.t_step_init = 0.5;
  for (auto _ : st) {
    SolveResult res = solve(eq, mp.F, opts);
    benchmark::DoNotOptimize(res.phi.values().data());
  }
}
BENCHMARK(BM_SmallSolve)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
