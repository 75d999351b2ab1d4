#include <benchmark/benchmark.h>

#include "sectorial/linalg.hpp"
#include "sectorial/sums.hpp"

using namespace sectorial;

namespace {

Matrix normal_operator(Eigen::Index d) {
  Rng rng = make_stream(9, 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector l(d);
  for (Eigen::Index i = 0; i < d; ++i) l(i) = std::polar(std::pow(10.0, u(rng)), 0.9 * u(rng));
  const Matrix U = random_unitary(d, rng);
  return U * l.asDiagonal() * U.adjoint();
}

void BM_MaxregHilbert(benchmark::State& state) {
  CauchyProblem pr;
  pr.A = normal_operator(state.range(1));
  pr.m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maximal_regularity_constant(pr).constant);
}
BENCHMARK(BM_MaxregHilbert)->ArgsProduct({{64, 256, 512}, {2, 8}})->Unit(benchmark::kMillisecond);

void BM_MaxregLp(benchmark::State& state) {
  CauchyProblem pr;
  pr.A = normal_operator(2);
  pr.m = static_cast<int>(state.range(0));
  pr.p = 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(maximal_regularity_constant(pr).constant);
}
BENCHMARK(BM_MaxregLp)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SDelta(benchmark::State& state) {
  const OperatorMatrix A(normal_operator(4));
  const TimeGrid g{1.0, static_cast<int>(state.range(0)), 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(s_delta_norm(A, 0.05, 2.0, g).value);
}
BENCHMARK(BM_SDelta)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
