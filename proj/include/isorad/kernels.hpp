#pragma once

// Data-parallel inner loops. Every kernel has a serial reference twin with an
// identical contract; tests and bench_kernels compare the two.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "isorad/curves.hpp"
#include "isorad/modmath.hpp"

namespace isorad::kernels {

/// Result of comparing boolean flags across a set of index pairs.
struct MismatchScan {
  u64 pairs = 0;
  u64 mismatches = 0;
  /// Lexicographically smallest mismatching (i, j).
  std::optional<std::pair<u64, u64>> first;

  friend bool operator==(const MismatchScan&, const MismatchScan&) = default;
};

/// All pairs (i, j) in first x second.
MismatchScan scan_product_serial(std::span<const std::uint8_t> first, std::span<const std::uint8_t> second);
MismatchScan scan_product_parallel(std::span<const std::uint8_t> first, std::span<const std::uint8_t> second);

/// Pairs (i, k) for k < stride, compared against second[i * stride + k].
MismatchScan scan_aligned_serial(std::span<const std::uint8_t> first, std::span<const std::uint8_t> second,
                                 std::size_t stride);
MismatchScan scan_aligned_parallel(std::span<const std::uint8_t> first, std::span<const std::uint8_t> second,
                                   std::size_t stride);

/// #E(F_p) for each prime, which must be of good reduction.
std::vector<u64> count_over_primes_serial(const CurveOverQ& curve, std::span<const u64> primes);
std::vector<u64> count_over_primes_parallel(const CurveOverQ& curve, std::span<const u64> primes);

/// dim E(F_p)[l] for each prime of good reduction.
std::vector<unsigned> torsion_rank_over_primes_serial(const CurveOverQ& curve, std::span<const u64> primes,
                                                      PrimeModulus ell);
std::vector<unsigned> torsion_rank_over_primes_parallel(const CurveOverQ& curve, std::span<const u64> primes,
                                                        PrimeModulus ell);

/// Sets the worker count for the parallel kernels (0 keeps the runtime default).
void set_jobs(unsigned jobs);

}  // namespace isorad::kernels
