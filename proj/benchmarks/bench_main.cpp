#include "gramentropy/ceml.hpp"
#include "gramentropy/entropy.hpp"
#include "gramentropy/idkernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace gramentropy;

namespace {

Matrix random_points(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix x(n, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
  return x;
}

void BM_EigSym(benchmark::State& state) {
  const auto n = state.range(0);
  const SymmetricMatrix g = gaussian_gram(random_points(n, 4, 1), KernelConfig(1.0)).symmetric();
  for (auto _ : state) benchmark::DoNotOptimize(eig_sym(g));
  state.SetComplexityN(n);
}
BENCHMARK(BM_EigSym)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNCubed);

void BM_RenyiEntropy(benchmark::State& state) {
  const auto n = state.range(0);
  const Matrix g = gaussian_gram(random_points(n, 4, 2), KernelConfig(1.0)).matrix();
  const EntropyOrder alpha(1.01);
  // Includes the eigendecomposition done when the density is built.
  for (auto _ : state) benchmark::DoNotOptimize(renyi_entropy(DensityMatrix(g), alpha));
}
BENCHMARK(BM_RenyiEntropy)->RangeMultiplier(2)->Range(32, 512);

void BM_CemlGradient(benchmark::State& state) {
  const auto n = state.range(0);
  const Eigen::Index m = state.range(1);
  std::vector<Label> labels(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<Label>(i % 3);
  const Dataset data(random_points(n, 6, 3), labels);
  const Matrix a = project_trace(random_points(6, 3, 4), 3);
  const EntropyOrder alpha(1.01);
  const std::optional<Eigen::Index> truncate = m > 0 ? std::optional<Eigen::Index>(m) : std::nullopt;
  for (auto _ : state) benchmark::DoNotOptimize(ceml_gradient(a, data, alpha, 1.0, truncate));
}
BENCHMARK(BM_CemlGradient)->Args({100, 0})->Args({200, 0})->Args({200, 20});

}  // namespace

BENCHMARK_MAIN();
