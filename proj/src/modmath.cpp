#include "isorad/modmath.hpp"

#include <limits>
#include <numeric>

namespace isorad {

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : small) {
    if (n % q == 0) return n == q;
  }
  if (n < 37 * 37) return true;

  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // The first twelve primes are a complete witness set below 3.3e24.
  for (u64 a : small) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(u64 value) : value_(value) {
  if (!is_prime(value)) throw Error("not a prime: " + std::to_string(value));
}

u64 inv_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) throw Error("inverse of zero");
  // Extended Euclid on signed 128-bit to stay exact near 2^64.
  i128 t = 0, new_t = 1;
  i128 r = p, new_r = a;
  while (new_r != 0) {
    i128 q = r / new_r;
    i128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw Error("residue not invertible");
  if (t < 0) t += p;
  return static_cast<u64>(t);
}

void FieldElement::require_same(const FieldElement& o) const {
  if (modulus_ != o.modulus_) throw Error("field elements with different moduli");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same(o);
  return FieldElement(add_mod(residue_, o.residue_, modulus_), modulus_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same(o);
  return FieldElement(sub_mod(residue_, o.residue_, modulus_), modulus_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same(o);
  return FieldElement(mul_mod(residue_, o.residue_, modulus_), modulus_);
}

FieldElement FieldElement::operator-() const {
  return FieldElement(sub_mod(0, residue_, modulus_), modulus_);
}

FieldElement FieldElement::pow(u64 exp) const {
  return FieldElement(pow_mod(residue_, exp, modulus_), modulus_);
}

FieldElement mod_inv(const FieldElement& x) {
  return FieldElement(inv_mod(x.residue(), x.modulus()), x.modulus());
}

int legendre_symbol(i64 a, PrimeModulus p) {
  if (p.value() == 2) throw Error("legendre symbol needs an odd prime");
  u64 r = reduce_signed(a, p.value());
  if (r == 0) return 0;
  return pow_mod(r, (p.value() - 1) / 2, p.value()) == 1 ? 1 : -1;
}

std::vector<PrimeModulus> primes_in_range(u64 lo, u64 hi) {
  if (lo < 2 || lo > hi) throw Error("primes_in_range needs 2 <= lo <= hi");
  std::vector<PrimeModulus> out;
  // Segmented sieve for small ranges; the bound keeps memory linear in hi-lo.
  if (hi - lo > (u64{1} << 32)) throw OverflowError("prime range too wide");
  u64 root = 1;
  while ((root + 1) <= hi / (root + 1)) ++root;
  std::vector<bool> base(root + 1, true);
  std::vector<u64> small;
  for (u64 i = 2; i <= root; ++i) {
    if (!base[i]) continue;
    small.push_back(i);
    for (u64 j = i * i; j <= root; j += i) base[j] = false;
  }
  std::vector<bool> seg(hi - lo + 1, true);
  for (u64 q : small) {
    u64 start = std::max(q * q, (lo + q - 1) / q * q);
    for (u64 j = start; j <= hi; j += q) {
      seg[j - lo] = false;
      if (j > hi - q) break;
    }
  }
  for (u64 i = 0; i < seg.size(); ++i) {
    if (seg[i]) out.emplace_back(lo + i);
  }
  return out;
}

unsigned valuation(u64 n, u64 ell) {
  if (n == 0) throw Error("valuation of zero");
  unsigned v = 0;
  while (n % ell == 0) {
    n /= ell;
    ++v;
  }
  return v;
}

u64 checked_mul(u64 a, u64 b) {
  u128 r = static_cast<u128>(a) * b;
  if (r > std::numeric_limits<u64>::max()) throw OverflowError("64-bit overflow");
  return static_cast<u64>(r);
}

u64 checked_pow(u64 base, unsigned exp) {
  u64 r = 1;
  for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

RationalInvariant::RationalInvariant(u64 numerator, u64 denominator) {
  if (denominator == 0) throw Error("zero denominator");
  numerator %= denominator;
  u64 g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
  if (num_ == 0) den_ = 1;
}

RationalInvariant RationalInvariant::operator+(const RationalInvariant& o) const {
  u64 g = std::gcd(den_, o.den_);
  u64 l = checked_mul(den_ / g, o.den_);
  u128 n = static_cast<u128>(num_) * (l / den_) + static_cast<u128>(o.num_) * (l / o.den_);
  return RationalInvariant(static_cast<u64>(n % l), l);
}

std::string RationalInvariant::str() const {
  if (num_ == 0) return "0";
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering compare_fractions(u64 a, u64 b, u64 c, u64 d) {
  return static_cast<u128>(a) * d <=> static_cast<u128>(c) * b;
}

}  // namespace isorad
