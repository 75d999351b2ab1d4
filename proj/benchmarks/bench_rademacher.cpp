#include <benchmark/benchmark.h>

#include "sectorial/linalg.hpp"
#include "sectorial/rademacher.hpp"

using namespace sectorial;

namespace {

std::vector<Vector> vectors(int n, Eigen::Index d) {
  Rng rng = make_stream(5, 0);
  std::vector<Vector> xs;
  for (int k = 0; k < n; ++k) xs.push_back(complex_gaussian(d, rng));
  return xs;
}

void BM_RademacherExhaustive(benchmark::State& state) {
  const std::vector<Vector> xs = vectors(static_cast<int>(state.range(0)), 8);
  const NormSpec n = NormSpec::lp(8, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(rademacher_mean(xs, n).value);
}
BENCHMARK(BM_RademacherExhaustive)->DenseRange(6, 14, 4)->Unit(benchmark::kMicrosecond);

void BM_RademacherSampled(benchmark::State& state) {
  const std::vector<Vector> xs = vectors(32, 8);
  const NormSpec n = NormSpec::lp(8, 1.5);
  SignConfig sign;
  sign.mode = SearchMode::Randomized;
  sign.samples = static_cast<int>(state.range(0));
  sign.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(rademacher_mean(xs, n, sign).value);
}
BENCHMARK(BM_RademacherSampled)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_RBound(benchmark::State& state) {
  Rng rng = make_stream(6, 0);
  std::vector<Matrix> members;
  for (int k = 0; k < 4; ++k) members.push_back(complex_gaussian(4, 4, rng));
  const OperatorFamily F(members, NormSpec::lp(4, 3.0));
  const SearchConfig search{8, 100, 42, 8};
  for (auto _ : state) benchmark::DoNotOptimize(r_bound(F, static_cast<int>(state.range(0)), {}, search).value);
}
BENCHMARK(BM_RBound)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
