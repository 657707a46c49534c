#include <benchmark/benchmark.h>

#include <random>

#include "semiscale/scaling.hpp"
#include "semiscale/tropical.hpp"

namespace {

using namespace semiscale;

ExtendedWeightMatrix random_weights(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(-3.0, -0.1);
  std::bernoulli_distribution absent(0.4);
  ExtendedWeightMatrix m(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!absent(rng)) m.set(i, j, ExtReal(weight(rng)));
  return m;
}

void BM_walk_supremum(benchmark::State& state) {
  const auto mu = random_weights(static_cast<std::size_t>(state.range(0)), 42);
  for (auto _ : state) {
    auto w = walk_supremum(mu);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_walk_supremum)->Arg(16)->Arg(64)->Arg(128)->Arg(256);

void BM_bounded_scaling(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> entry(0.0, 1.0);
  Eigen::MatrixXd f(n, n);
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = entry(rng) * 0.9 / double(n);
  const NonnegMatrix m(f);
  for (auto _ : state) {
    auto d = bounded_scaling(m, 4.0);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_bounded_scaling)->Arg(16)->Arg(64)->Arg(128);

}  // namespace
