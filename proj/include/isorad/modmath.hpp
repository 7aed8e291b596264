#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace isorad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would leave the machine-word range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Deterministic primality test, exact over the whole 64-bit range.
bool is_prime(u64 n);

/// A prime number, checked on construction.
class PrimeModulus {
 public:
  explicit PrimeModulus(u64 value);

  u64 value() const noexcept { return value_; }
  operator u64() const noexcept { return value_; }

  friend bool operator==(PrimeModulus, PrimeModulus) = default;
  friend auto operator<=>(PrimeModulus, PrimeModulus) = default;

 private:
  u64 value_;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return (s >= m || s < a) ? s - m : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

u64 pow_mod(u64 base, u64 exp, u64 m);

/// Reduces a signed integer into [0, m).
inline u64 reduce_signed(i64 a, u64 m) {
  i64 r = static_cast<i64>(static_cast<i128>(a) % static_cast<i128>(m));
  return r < 0 ? static_cast<u64>(r + static_cast<i64>(m)) : static_cast<u64>(r);
}

inline u64 reduce_signed(i128 a, u64 m) {
  i128 r = a % static_cast<i128>(m);
  if (r < 0) r += static_cast<i128>(m);
  return static_cast<u64>(r);
}

/// Inverse of a nonzero residue modulo a prime. Throws Error on zero.
u64 inv_mod(u64 a, u64 p);

/// An element of the prime field F_p. Mixed-modulus arithmetic throws.
class FieldElement {
 public:
  FieldElement(u64 residue, PrimeModulus modulus)
      : residue_(residue % modulus.value()), modulus_(modulus) {}
  static FieldElement from_signed(i64 value, PrimeModulus modulus) {
    return FieldElement(reduce_signed(value, modulus.value()), modulus);
  }

  u64 residue() const noexcept { return residue_; }
  PrimeModulus modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return residue_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement pow(u64 exp) const;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  void require_same(const FieldElement& o) const;

  u64 residue_;
  PrimeModulus modulus_;
};

/// Multiplicative inverse in F_p; throws Error for zero.
FieldElement mod_inv(const FieldElement& x);

/// Legendre symbol (a / p) for an odd prime p.
int legendre_symbol(i64 a, PrimeModulus p);

/// All primes in [lo, hi], ascending.
std::vector<PrimeModulus> primes_in_range(u64 lo, u64 hi);

/// Exponent of the prime `ell` in n (n > 0).
unsigned valuation(u64 n, u64 ell);

/// Overflow-checked product.
u64 checked_mul(u64 a, u64 b);
/// Overflow-checked power.
u64 checked_pow(u64 base, unsigned exp);

/// An element of Q/Z given as a reduced fraction in [0, 1).
class RationalInvariant {
 public:
  RationalInvariant() = default;
  /// numerator/denominator reduced into [0, 1) and lowest terms.
  RationalInvariant(u64 numerator, u64 denominator);

  u64 numerator() const noexcept { return num_; }
  u64 denominator() const noexcept { return den_; }

  /// Sum in Q/Z.
  RationalInvariant operator+(const RationalInvariant& o) const;

  friend bool operator==(const RationalInvariant&, const RationalInvariant&) = default;
  /// Ordering of the representatives in [0, 1).
  friend std::strong_ordering operator<=>(const RationalInvariant& a,
                                          const RationalInvariant& b) {
    return static_cast<u128>(a.num_) * b.den_ <=> static_cast<u128>(b.num_) * a.den_;
  }

  std::string str() const;

 private:
  u64 num_ = 0;
  u64 den_ = 1;
};

/// Compares the real number a/b with c/d (b, d > 0).
std::strong_ordering compare_fractions(u64 a, u64 b, u64 c, u64 d);

/// SplitMix64 step; used to derive independent per-task seeds.
inline u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Small deterministic generator with a portable bounded draw.
/// std::uniform_int_distribution is implementation-defined, so it is not used.
class Rng {
 public:
  explicit Rng(u64 seed) : state_(seed) {}
  u64 next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    u64 z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, n), n > 0, by rejection.
  u64 below(u64 n) {
    const u64 limit = ~u64{0} - (~u64{0} % n);
    u64 r;
    do {
      r = next();
    } while (r >= limit);
    return r % n;
  }

 private:
  u64 state_;
};

}  // namespace isorad
