#include <benchmark/benchmark.h>

#include "nrbridge/bridge.hpp"
#include "nrbridge/keldysh.hpp"
#include "nrbridge/lindblad.hpp"
#include "nrbridge/sweep.hpp"

using namespace nrbridge;

static void BM_KeldyshSolve(benchmark::State& state) {
  const EffectiveModel m = sweep_point_model(SweepModel{}, 1.0, 2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve(m).loss_current);
}
BENCHMARK(BM_KeldyshSolve)->Unit(benchmark::kMillisecond);

static void BM_LindbladSteadyState(benchmark::State& state) {
  BridgeInstance inst;
  inst.regime = BridgeRegime::kAdiabatic;
  inst.cavity_loss = 10.0;
  const LindbladSystem sys = build_full_lindblad(inst, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(sys.hamiltonian, sys.channels).trace());
  state.SetLabel("D = " + std::to_string(sys.space.dimension()));
}
BENCHMARK(BM_LindbladSteadyState)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_QuadraticSteadyState(benchmark::State& state) {
  const auto n = state.range(0);
  MatrixC h = MatrixC::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) h(i, i + 1) = h(i + 1, i) = 1.0;
  const VectorD loss = VectorD::Constant(n, 0.5), gain = VectorD::Constant(n, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(quadratic_steady_state(h, loss, gain).trace());
}
BENCHMARK(BM_QuadraticSteadyState)->Arg(3)->Arg(8)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
