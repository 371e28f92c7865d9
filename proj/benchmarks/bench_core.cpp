#include <benchmark/benchmark.h>

#include "sdrift/donsker_delta.hpp"
#include "sdrift/local_time.hpp"
#include "sdrift/optimal_control.hpp"
#include "sdrift/path_engine.hpp"
#include "sdrift/performance_eval.hpp"

namespace {

using namespace sdrift;

MarketParams jump_market() {
  MarketParams m;
  m.r = 0.01;
  m.mu = 0.08;
  m.sigma = 0.2;
  m.alpha = 0.3;
  m.nu = LevyMeasure({{1.0, 1.0}, {-0.5, 2.0}});
  m.gamma = {0.3, 0.1};
  return m;
}

DriverSpec jump_driver() { return {PiecewiseConstant(1.0), {PiecewiseConstant(0.5), PiecewiseConstant(-0.25)}}; }

void BM_FourierDelta(benchmark::State& state) {
  ForwardKernel k;
  k.m = static_cast<double>(state.range(0));
  k.continuous_variance = 0.25;
  k.loads = {{0.5, 0.25}, {-0.25, 0.5}};
  for (auto _ : state) benchmark::DoNotOptimize(delta_general_conditional(k));
}
BENCHMARK(BM_FourierDelta)->Arg(0)->Arg(2)->Arg(10);

void BM_GaussianDelta(benchmark::State& state) {
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta_bm_conditional(x, 0.25));
    x += 1e-9;
  }
}
BENCHMARK(BM_GaussianDelta);

void BM_ExpectedLocalTime(benchmark::State& state) {
  const auto m = jump_market();
  const auto d = jump_driver();
  for (auto _ : state) benchmark::DoNotOptimize(expected_local_time(d, m.nu, 0.0, 1.0));
}
BENCHMARK(BM_ExpectedLocalTime)->Unit(benchmark::kMillisecond);

void BM_SimulatePath(benchmark::State& state) {
  const auto m = jump_market();
  const TimeGrid g(1.0, static_cast<std::size_t>(state.range(0)));
  const PathSimulator sim(jump_driver(), m.nu, g);
  SamplePath path;
  std::size_t i = 0;
  for (auto _ : state) {
    sim.simulate(1, i++, path);
    benchmark::DoNotOptimize(path.y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePath)->Arg(1000)->Arg(10000);

void BM_PortfolioSolve(benchmark::State& state) {
  RootEquationCoefficients k;
  k.a1 = 0.06;
  k.a2 = 1.0;
  k.rhs = 0.3;
  k.jumps = {{0.3, 1.0}, {0.1, 2.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_portfolio_star(k));
    k.rhs += 1e-12;
  }
}
BENCHMARK(BM_PortfolioSolve);

void BM_DelayedPolicy(benchmark::State& state) {
  const auto m = jump_market();
  const bool jumps = state.range(0) != 0;
  const DriverSpec d = jumps ? jump_driver() : DriverSpec::brownian();
  const TimeGrid g(1.0, 200);
  const auto path = PathSimulator(d, m.nu, g).simulate(3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(delayed_policy(path, g, m, d, {0.5, 1.0}, 0.1));
  state.SetLabel(jumps ? "jump driver" : "Brownian driver");
}
BENCHMARK(BM_DelayedPolicy)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_EvaluateJ(benchmark::State& state) {
  MarketParams m;
  m.mu = 0.1;
  m.alpha = 0.5;
  m.sigma = 0.2;
  const TimeGrid g(1.0, 1000);
  EvalOptions o;
  o.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_J(m, DriverSpec::brownian(), {0.0, 1.0}, 0.1, g, 1000, 5, {}, o));
  }
}
BENCHMARK(BM_EvaluateJ)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
