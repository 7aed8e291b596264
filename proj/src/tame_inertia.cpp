#include "isorad/tame_inertia.hpp"

namespace isorad {

RationalInvariant ExponentPattern::invariant(u64 ell) const {
  if (exponents.size() != level || level == 0) throw Error("exponent pattern length must equal its level");
  const u64 den = checked_pow(ell, level) - 1;
  u64 num = 0;
  u64 power = 1;
  for (unsigned k = 0; k < level; ++k) {
    if (exponents[k] > 1) throw Error("exponents must be 0 or 1");
    if (exponents[k]) num += power;  // sum <= (l^n - 1)/(l - 1), no overflow
    if (k + 1 < level) power *= ell;
  }
  return RationalInvariant(num, den);
}

InvariantSet enumerate_invariants(unsigned g, PrimeModulus ell) {
  if (g == 0) throw Error("g must be at least 1");
  if (ell.value() < 3) throw Error("l must be odd");
  checked_pow(ell.value(), 2 * g);
  if (2 * g > 16) throw CapExceeded("too many exponent patterns");
  InvariantSet out{g, ell.value(), {}};
  for (unsigned n = 1; n <= 2 * g; ++n) {
    ExponentPattern pat{n, std::vector<std::uint8_t>(n, 0)};
    for (u64 mask = 0; mask < (u64{1} << n); ++mask) {
      for (unsigned k = 0; k < n; ++k) pat.exponents[k] = (mask >> k) & 1;
      out.values.insert(pat.invariant(ell.value()));
    }
  }
  return out;
}

BoundCheck bound_check(unsigned g, PrimeModulus ell) {
  const InvariantSet x = enumerate_invariants(g, ell);
  const RationalInvariant m = x.max();
  const u64 l1 = ell.value() - 1;
  return {m, compare_fractions(m.numerator(), m.denominator(), 2 * g, l1) < 0,
          m == RationalInvariant(1, l1)};
}

bool pairwise_differences_below_half(const InvariantSet& x) {
  for (const auto& a : x.values) {
    for (const auto& b : x.values) {
      if (b < a) continue;
      // 2 (b - a) < 1  <=>  2 (b.n a.d - a.n b.d) < a.d b.d
      const u128 lhs = 2 * (static_cast<u128>(b.numerator()) * a.denominator() -
                            static_cast<u128>(a.numerator()) * b.denominator());
      const u128 rhs = static_cast<u128>(a.denominator()) * b.denominator();
      if (lhs >= rhs) return false;
    }
  }
  return true;
}

ThresholdStatus threshold_status(unsigned g, PrimeModulus ell) {
  if (ell.value() < 4 * static_cast<u64>(g) + 1) return ThresholdStatus::BelowThreshold;
  const InvariantSet x = enumerate_invariants(g, ell);
  const BoundCheck b = bound_check(g, ell);
  return b.below_bound && pairwise_differences_below_half(x) ? ThresholdStatus::Pass : ThresholdStatus::Fail;
}

bool unramified_threshold_check(unsigned g, u64 ell_max) {
  const u64 lo = 4 * static_cast<u64>(g) + 1;
  if (ell_max < lo) return true;
  for (PrimeModulus l : primes_in_range(lo, ell_max))
    if (threshold_status(g, l) == ThresholdStatus::Fail) return false;
  return true;
}

}  // namespace isorad
