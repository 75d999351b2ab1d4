#include <benchmark/benchmark.h>

#include "sectorial/calculus.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/operators.hpp"

using namespace sectorial;

namespace {

Matrix random_sectorial(Eigen::Index d, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector l(d);
  for (Eigen::Index i = 0; i < d; ++i) l(i) = std::polar(std::pow(10.0, u(rng)), 0.5 * u(rng));
  const Matrix V = random_unitary(d, rng) + 0.3 * complex_gaussian(d, d, rng);
  return V * l.asDiagonal() * V.inverse();
}

void BM_ContourFcalc(benchmark::State& state) {
  const OperatorMatrix A(random_sectorial(state.range(0), 1));
  const ScalarFunction f = fn::z_over_one_plus_z_squared();
  for (auto _ : state) benchmark::DoNotOptimize(contour_fcalc(A, f).value.data());
}
BENCHMARK(BM_ContourFcalc)->Arg(4)->Arg(8)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ContourFcalcNodes(benchmark::State& state) {
  const OperatorMatrix A(random_sectorial(8, 2));
  const ScalarFunction f = fn::z_over_one_plus_z_squared();
  ContourSpec c;
  c.nodes_per_decade = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(contour_fcalc(A, f, c).value.data());
}
BENCHMARK(BM_ContourFcalcNodes)->Arg(10)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_RegularizedFcalc(benchmark::State& state) {
  const OperatorMatrix A(random_sectorial(state.range(0), 3));
  const ScalarFunction f = fn::resolvent(-1.0);
  const ContourSpec c = ContourSpec::between(spectral_angle(A).angle(), f.domain_angle);
  for (auto _ : state) benchmark::DoNotOptimize(regularized_fcalc(A, f, c).value.data());
}
BENCHMARK(BM_RegularizedFcalc)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
