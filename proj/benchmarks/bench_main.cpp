#include <benchmark/benchmark.h>

#include <cmath>

#include "rmflab/euler.hpp"
#include "rmflab/moments.hpp"
#include "rmflab/ntcore.hpp"
#include "rmflab/sampler.hpp"

using namespace rmflab;

namespace {

const PrimeList& primes_1m() {
  static const PrimeList primes = PrimeList::build(1'000'000);
  return primes;
}

const SpfTable& spf_1m() {
  static const SpfTable spf = SpfTable::build(1'000'000);
  return spf;
}

void BM_BuildSpf(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(SpfTable::build(limit));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildSpf)->Arg(100'000)->Arg(1'000'000)->Arg(10'000'000);

void BM_GenerateSample(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  RmfSample sample;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RmfSample::generate_into(sample, limit, Model::kSteinhaus, ++seed, primes_1m());
    benchmark::DoNotOptimize(sample.phase(0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sample.prime_count()));
}
BENCHMARK(BM_GenerateSample)->Arg(10'000)->Arg(1'000'000);

void BM_PartialSum(benchmark::State& state) {
  const auto n = state.range(0);
  const auto coeffs = CoefficientSpec::all_ones(n);
  RmfSample sample;
  std::vector<std::complex<double>> work;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RmfSample::generate_into(sample, static_cast<std::uint64_t>(n), Model::kSteinhaus, ++seed,
                             primes_1m());
    benchmark::DoNotOptimize(partial_sum(sample, coeffs, spf_1m(), work));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PartialSum)->Arg(10'000)->Arg(100'000)->Arg(1'000'000);

void BM_EnergyFast(benchmark::State& state) {
  const auto coeffs = CoefficientSpec::all_ones(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy_fast(coeffs));
  }
}
BENCHMARK(BM_EnergyFast)->Arg(300)->Arg(1000)->Arg(2000);

void BM_IntegralSq(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  const EulerParams params{11.0, x, 0.01, std::nullopt};
  RmfSample sample;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RmfSample::generate_into(sample, static_cast<std::uint64_t>(x), Model::kSteinhaus, ++seed,
                             primes_1m());
    benchmark::DoNotOptimize(integral_sq(sample, params));
  }
}
BENCHMARK(BM_IntegralSq)->Arg(10'000)->Arg(100'000);

}  // namespace

BENCHMARK_MAIN();
