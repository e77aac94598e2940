#include <benchmark/benchmark.h>

#include "wrcouple/experiments.hpp"
#include "wrcouple/theory.hpp"

using namespace wrcouple;
namespace ex = wrcouple::experiments;

namespace {

const Material air = Material::make("air", 0.0243, 1.293, 1005);
const Material steel = Material::make("steel", 48.9, 7836, 443);

void BM_Assemble1D(benchmark::State& state) {
  const auto mesh = fem::MeshSpec::make(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fem::assemble_1d(steel, mesh, fem::Side::left));
}
BENCHMARK(BM_Assemble1D)->Arg(100)->Arg(1000)->Arg(10000);

void BM_Assemble2D(benchmark::State& state) {
  const auto mesh = fem::MeshSpec::make(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fem::assemble_2d(steel, mesh, fem::Side::right));
}
BENCHMARK(BM_Assemble2D)->Arg(10)->Arg(50);

void BM_DirichletStep(benchmark::State& state) {
  const auto integ = state.range(1) == 0 ? stepping::Integrator::euler
                                         : stepping::Integrator::sdirk2;
  const auto op = fem::assemble(steel, fem::MeshSpec::make(static_cast<int>(state.range(0)), 50),
                                fem::Side::left);
  const stepping::SubdomainStepper st(op, 0.01, integ);
  const stepping::Vector u = stepping::Vector::Ones(op.interior_size());
  const stepping::Vector g0 = stepping::Vector::Ones(op.interface_size());
  const stepping::Vector g1 = 2 * g0;
  for (auto _ : state) benchmark::DoNotOptimize(st.dirichlet_step(u, g0, g1));
}
BENCHMARK(BM_DirichletStep)->Args({1, 0})->Args({1, 1})->Args({2, 0})->Args({2, 1});

void BM_NnwrMultirate(benchmark::State& state) {
  ex::ExperimentSpec s;
  s.left = air;
  s.right = steel;
  s.dx = 1.0 / 500;
  s.parallel = state.range(0) != 0;
  const auto cfg = ex::make_config(s, 0.2, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(waveform::solve(cfg).iterations);
}
BENCHMARK(BM_NnwrMultirate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Nnwr2D(benchmark::State& state) {
  ex::ExperimentSpec s;
  s.left = air;
  s.right = steel;
  s.dim = 2;
  s.dx = 1.0 / 20;
  const auto cfg = ex::make_config(s, 0.1, 0.02);
  for (auto _ : state) benchmark::DoNotOptimize(waveform::solve(cfg).iterations);
}
BENCHMARK(BM_Nnwr2D)->Unit(benchmark::kMillisecond);

void BM_SigmaRate2D(benchmark::State& state) {
  const auto mesh = fem::MeshSpec::make(2, static_cast<int>(state.range(0)));
  const auto l = fem::assemble_2d(air, mesh, fem::Side::left);
  const auto r = fem::assemble_2d(steel, mesh, fem::Side::right);
  for (auto _ : state) benchmark::DoNotOptimize(theory::sigma_rate(l, r, 0.1, 3e-4).sigma_radius);
}
BENCHMARK(BM_SigmaRate2D)->Arg(10)->Arg(40);

void BM_ThetaOpt1D(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(theory::theta_opt_1d(air, steel, 1.0, 0.001, 999));
}
BENCHMARK(BM_ThetaOpt1D);

}  // namespace

BENCHMARK_MAIN();
