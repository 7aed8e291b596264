#include "isorad/kernels.hpp"

#include <omp.h>

#include <limits>

namespace isorad::kernels {

namespace {

constexpr u64 kNone = std::numeric_limits<u64>::max();

std::optional<std::pair<u64, u64>> decode(u64 flat, u64 stride) {
  if (flat == kNone) return std::nullopt;
  return std::pair<u64, u64>{flat / stride, flat % stride};
}

std::vector<ReducedCurve> reduce_all(const CurveOverQ& curve, std::span<const u64> primes) {
  std::vector<ReducedCurve> out;
  out.reserve(primes.size());
  for (u64 p : primes) {
    if (p > kDefaultCountCap) throw CapExceeded("p = " + std::to_string(p) + " exceeds the counting cap");
    out.push_back(reduce_or_throw(curve, PrimeModulus(p)));
  }
  return out;
}

}  // namespace

MismatchScan scan_product_serial(std::span<const std::uint8_t> first, std::span<const std::uint8_t> second) {
  MismatchScan r;
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = 0; j < second.size(); ++j) {
      ++r.pairs;
      if (first[i] != second[j]) {
        if (!r.first) r.first = {i, j};
        ++r.mismatches;
      }
    }
  }
  return r;
}

MismatchScan scan_product_parallel(std::span<const std::uint8_t> first, std::span<const std::uint8_t> second) {
  const auto n = static_cast<std::int64_t>(first.size());
  const u64 m = second.size();
  u64 mismatches = 0;
  u64 best = kNone;
#pragma omp parallel for schedule(static) reduction(+ : mismatches) reduction(min : best)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint8_t f = first[i];
    u64 local = 0;
    for (u64 j = 0; j < m; ++j) local += (second[j] != f);
    mismatches += local;
    if (local != 0 && best == kNone) {
      for (u64 j = 0; j < m; ++j) {
        if (second[j] != f) {
          best = std::min(best, static_cast<u64>(i) * m + j);
          break;
        }
      }
    }
  }
  MismatchScan r;
  r.pairs = static_cast<u64>(n) * m;
  r.mismatches = mismatches;
  if (m != 0) r.first = decode(best, m);
  return r;
}

MismatchScan scan_aligned_serial(std::span<const std::uint8_t> first, std::span<const std::uint8_t> second,
                                 std::size_t stride) {
  if (second.size() != first.size() * stride) throw Error("aligned scan size mismatch");
  MismatchScan r;
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t k = 0; k < stride; ++k) {
      ++r.pairs;
      if (first[i] != second[i * stride + k]) {
        if (!r.first) r.first = {i, k};
        ++r.mismatches;
      }
    }
  }
  return r;
}

MismatchScan scan_aligned_parallel(std::span<const std::uint8_t> first, std::span<const std::uint8_t> second,
                                   std::size_t stride) {
  if (second.size() != first.size() * stride) throw Error("aligned scan size mismatch");
  const auto total = static_cast<std::int64_t>(second.size());
  u64 mismatches = 0;
  u64 best = kNone;
#pragma omp parallel for schedule(static) reduction(+ : mismatches) reduction(min : best)
  for (std::int64_t t = 0; t < total; ++t) {
    if (first[static_cast<u64>(t) / stride] != second[t]) {
      ++mismatches;
      best = std::min(best, static_cast<u64>(t));
    }
  }
  MismatchScan r;
  r.pairs = static_cast<u64>(total);
  r.mismatches = mismatches;
  if (stride != 0) r.first = decode(best, stride);
  return r;
}

std::vector<u64> count_over_primes_serial(const CurveOverQ& curve, std::span<const u64> primes) {
  std::vector<u64> out(primes.size());
  for (std::size_t k = 0; k < primes.size(); ++k) {
    out[k] = count_points(reduce_or_throw(curve, PrimeModulus(primes[k]))).count;
  }
  return out;
}

std::vector<u64> count_over_primes_parallel(const CurveOverQ& curve, std::span<const u64> primes) {
  // Validation happens before the parallel region, which must not throw.
  const auto reduced = reduce_all(curve, primes);
  std::vector<u64> out(primes.size());
  const auto n = static_cast<std::int64_t>(primes.size());
  // Cost grows with p; dynamic scheduling keeps the tail balanced.
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t k = 0; k < n; ++k) out[k] = count_points(reduced[k]).count;
  return out;
}

std::vector<unsigned> torsion_rank_over_primes_serial(const CurveOverQ& curve, std::span<const u64> primes,
                                                      PrimeModulus ell) {
  std::vector<unsigned> out(primes.size());
  for (std::size_t k = 0; k < primes.size(); ++k) {
    out[k] = ell_torsion_rank(reduce_or_throw(curve, PrimeModulus(primes[k])), ell).rank;
  }
  return out;
}

std::vector<unsigned> torsion_rank_over_primes_parallel(const CurveOverQ& curve, std::span<const u64> primes,
                                                        PrimeModulus ell) {
  const auto reduced = reduce_all(curve, primes);
  for (u64 p : primes)
    if (p == ell.value()) throw Error("l must differ from p");
  std::vector<unsigned> out(primes.size());
  const auto n = static_cast<std::int64_t>(primes.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t k = 0; k < n; ++k) out[k] = ell_torsion_rank(reduced[k], ell).rank;
  return out;
}

void set_jobs(unsigned jobs) {
  if (jobs != 0) omp_set_num_threads(static_cast<int>(jobs));
}

}  // namespace isorad::kernels
