#include <benchmark/benchmark.h>

#include "pbc/hyptest.hpp"
#include "pbc/random.hpp"

namespace {

void BM_HypTestRelEntropy(benchmark::State& state) {
  pbc::Rng rng = pbc::make_rng(2);
  const int d = static_cast<int>(state.range(0));
  const auto rho = pbc::random_density(rng, d);
  const auto sigma = pbc::random_density(rng, d);
  for (auto _ : state) benchmark::DoNotOptimize(pbc::hyp_test_rel_entropy(rho, sigma, 0.1));
}
BENCHMARK(BM_HypTestRelEntropy)->RangeMultiplier(2)->Range(2, 64);

void BM_Helstrom(benchmark::State& state) {
  pbc::Rng rng = pbc::make_rng(3);
  const int d = static_cast<int>(state.range(0));
  const auto a = pbc::random_psd(rng, d, 0.5);
  const auto b = pbc::random_psd(rng, d, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(pbc::helstrom_error(a, b));
}
BENCHMARK(BM_Helstrom)->RangeMultiplier(2)->Range(2, 64);

void BM_IidHypTestRate(benchmark::State& state) {
  const auto rho = pbc::HermitianOperator::diagonal({0.8, 0.2});
  const auto sigma = pbc::HermitianOperator::diagonal({0.4, 0.6});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pbc::iid_hyp_test_rate(rho, sigma, n, 0.3));
}
BENCHMARK(BM_IidHypTestRate)->RangeMultiplier(4)->Range(16, 4096);

}  // namespace
