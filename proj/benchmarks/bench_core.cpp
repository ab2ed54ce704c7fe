#include <benchmark/benchmark.h>

#include <cmath>

#include "frobcert/analytic.hpp"
#include "frobcert/casework.hpp"
#include "frobcert/semigroup.hpp"
#include "frobcert/sieve.hpp"

namespace {

using frobcert::u64;

void BM_IsPrime(benchmark::State& state) {
  u64 n = 1'000'000'007ULL;
  for (auto _ : state) {
    benchmark::DoNotOptimize(frobcert::is_prime(n));
    n += 2;
  }
}
BENCHMARK(BM_IsPrime);

void BM_SieveCount(benchmark::State& state) {
  const u64 limit = static_cast<u64>(state.range(0));
  for (auto _ : state) {
    frobcert::SegmentedSieve sieve;
    benchmark::DoNotOptimize(sieve.count_primes(2, limit));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(limit));
}
BENCHMARK(BM_SieveCount)->Arg(1'000'000)->Arg(100'000'000);

void BM_IsRepresentable(benchmark::State& state) {
  const auto pair = frobcert::make_pair(10007, 65537);
  u64 n = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(frobcert::is_representable(pair, n));
    n = (n * 2862933555777941757ULL + 3037000493ULL) % pair.g;
  }
}
BENCHMARK(BM_IsRepresentable);

void BM_WitnessSearch(benchmark::State& state) {
  // composite-composite residual pair: full y=1 scan each iteration
  const auto pair = frobcert::make_pair(10005, 49999 + 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(frobcert::certify(pair));
  }
}
BENCHMARK(BM_WitnessSearch);

void BM_LogIntegral(benchmark::State& state) {
  double x = 8e9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(frobcert::log_integral(x));
    x += 1e6;
  }
}
BENCHMARK(BM_LogIntegral);

void BM_ShortIntervalMargin(benchmark::State& state) {
  double g = 5e8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        frobcert::short_interval_margin(g, std::log(std::sqrt(g)), 155.0));
    g *= 1.0000001;
  }
}
BENCHMARK(BM_ShortIntervalMargin);

}  // namespace

BENCHMARK_MAIN();
