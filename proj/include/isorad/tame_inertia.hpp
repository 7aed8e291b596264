#pragma once

// Invariants in Q/Z of tame inertia characters built from fundamental
// characters of level n <= 2g with exponents in {0, 1}:
//   X = { sum_{k in S} l^k / (l^n - 1) : S subset of {0..n-1}, 1 <= n <= 2g }.
// All arithmetic is exact.

#include <set>
#include <vector>

#include "isorad/modmath.hpp"

namespace isorad {

/// A level n and one exponent e(k) in {0, 1} per k in [0, n).
struct ExponentPattern {
  unsigned level;
  std::vector<std::uint8_t> exponents;

  /// sum e(k) l^k / (l^n - 1) in Q/Z.
  RationalInvariant invariant(u64 ell) const;
};

struct InvariantSet {
  unsigned g;
  u64 ell;
  std::set<RationalInvariant> values;

  RationalInvariant max() const { return *values.rbegin(); }
};

/// Throws OverflowError when l^{2g} leaves 64 bits, Error for g = 0 or l < 3.
InvariantSet enumerate_invariants(unsigned g, PrimeModulus ell);

struct BoundCheck {
  RationalInvariant max_value;
  /// max(X) < 2g / (l - 1).
  bool below_bound;
  /// max(X) == 1 / (l - 1).
  bool max_is_geometric_sum;
};

BoundCheck bound_check(unsigned g, PrimeModulus ell);

/// Every |x - x'| < 1/2 over X.
bool pairwise_differences_below_half(const InvariantSet& x);

enum class ThresholdStatus { BelowThreshold, Pass, Fail };

/// One prime: below the threshold l >= 4g + 1 the bound says nothing.
ThresholdStatus threshold_status(unsigned g, PrimeModulus ell);

/// True iff every prime 4g + 1 <= l <= ell_max passes.
bool unramified_threshold_check(unsigned g, u64 ell_max);

}  // namespace isorad
