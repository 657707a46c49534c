#include <benchmark/benchmark.h>

#include <random>

#include "semiscale/counterexample.hpp"
#include "semiscale/semigroup.hpp"

namespace {

using namespace semiscale;

std::vector<NonnegMatrix> conjugated_generators(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> diag(0.1, 10.0);
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = diag(rng);

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution keep(0.6);

  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    if (keep(rng)) b(i, perm[i]) = d[i] / d[perm[i]];
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) c(i, (i + 1) % n) = d[i] / d[(i + 1) % n];
  return {NonnegMatrix(b), NonnegMatrix(c)};
}

void BM_generate_closure(benchmark::State& state) {
  const auto gens =
      conjugated_generators(static_cast<std::size_t>(state.range(0)), 1234);
  for (auto _ : state) {
    auto closure = generate_closure(gens, CompositionRule::standard(), 20000);
    benchmark::DoNotOptimize(closure);
    state.counters["elements"] = static_cast<double>(closure.elements.size());
  }
}
BENCHMARK(BM_generate_closure)->Arg(4)->Arg(5)->Arg(6);

void BM_binary_rescale(benchmark::State& state) {
  const auto gens =
      conjugated_generators(static_cast<std::size_t>(state.range(0)), 99);
  for (auto _ : state) {
    auto result = binary_diagonal_rescale(gens, 20000);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_binary_rescale)->Arg(4)->Arg(6);

void BM_counterexample_verify(benchmark::State& state) {
  const auto inst =
      build_instance<double>(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    auto res = verify_semigroup(inst);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_counterexample_verify)->Arg(64)->Arg(128)->Arg(256);

}  // namespace
