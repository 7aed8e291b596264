// Serial reference vs OpenMP kernels. Run with --benchmark_filter=... as usual.
#include <benchmark/benchmark.h>

#include "isorad/curves.hpp"
#include "isorad/kernels.hpp"

namespace {

using namespace isorad;

std::vector<u64> good_primes(const CurveOverQ& c, u64 hi) {
  std::vector<u64> out;
  for (PrimeModulus p : primes_in_range(5, hi))
    if (reduce(c, p)) out.push_back(p.value());
  return out;
}

const CurveOverQ& curve() {
  static const CurveOverQ c("E", 0, 1, 1);
  return c;
}

std::vector<std::uint8_t> flags(std::size_t n, u64 seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> v(n);
  for (auto& x : v) x = rng.below(4) == 0;
  return v;
}

template <auto Fn>
void BM_count(benchmark::State& st) {
  const auto primes = good_primes(curve(), static_cast<u64>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(curve(), primes));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(primes.size()));
}

template <auto Fn>
void BM_torsion(benchmark::State& st) {
  const auto primes = good_primes(curve(), static_cast<u64>(st.range(0)));
  std::vector<u64> usable;
  for (u64 p : primes)
    if (p != 3) usable.push_back(p);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(curve(), usable, PrimeModulus(3)));
}

template <auto Fn>
void BM_scan(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = flags(n, 1), b = flags(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(a, b));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(n * n));
}

}  // namespace

BENCHMARK(BM_count<kernels::count_over_primes_serial>)->Name("count/serial")->Arg(2000)->Arg(10000);
BENCHMARK(BM_count<kernels::count_over_primes_parallel>)->Name("count/parallel")->Arg(2000)->Arg(10000);
BENCHMARK(BM_torsion<kernels::torsion_rank_over_primes_serial>)->Name("torsion/serial")->Arg(5000);
BENCHMARK(BM_torsion<kernels::torsion_rank_over_primes_parallel>)->Name("torsion/parallel")->Arg(5000);
BENCHMARK(BM_scan<kernels::scan_product_serial>)->Name("scan_product/serial")->Arg(1000)->Arg(4000);
BENCHMARK(BM_scan<kernels::scan_product_parallel>)->Name("scan_product/parallel")->Arg(1000)->Arg(4000);

BENCHMARK_MAIN();
