#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isorad/modmath.hpp"

namespace isorad {

class SingularCurve : public Error {
 public:
  using Error::Error;
};

class BadReduction : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// The cache disagrees with the curve file it is being extended from.
class CacheConflict : public Error {
 public:
  using Error::Error;
};

/// Coefficients are limited so the discriminant stays exact in 128 bits.
inline constexpr i64 kMaxCoefficient = 1'000'000'000;
/// Largest p accepted by the O(p) point counter.
inline constexpr u64 kDefaultCountCap = 1'000'000;

/// y^2 = x^3 + a2 x^2 + a4 x + a6 over Q.
class CurveOverQ {
 public:
  /// Throws SingularCurve when the discriminant vanishes and
  /// OverflowError when a coefficient exceeds kMaxCoefficient.
  CurveOverQ(std::string label, i64 a2, i64 a4, i64 a6);

  const std::string& label() const noexcept { return label_; }
  i64 a2() const noexcept { return a2_; }
  i64 a4() const noexcept { return a4_; }
  i64 a6() const noexcept { return a6_; }
  /// 16 * disc(x^3 + a2 x^2 + a4 x + a6).
  i128 discriminant() const noexcept { return disc_; }

  /// a2 = 0 with a4 = 0 or a6 = 0: the j = 0 and j = 1728 families, which have CM.
  bool known_cm_shape() const noexcept { return a2_ == 0 && (a4_ == 0 || a6_ == 0); }

  friend bool operator==(const CurveOverQ&, const CurveOverQ&) = default;

 private:
  std::string label_;
  i64 a2_, a4_, a6_;
  i128 disc_;
};

std::string to_string(i128 v);

/// Good reduction of a curve at a prime p >= 5.
struct ReducedCurve {
  std::string label;
  PrimeModulus p;
  u64 a2, a4, a6;

  u64 rhs(u64 x) const;
};

/// nullopt when p divides the discriminant. Throws Error for p < 5.
std::optional<ReducedCurve> reduce(const CurveOverQ& curve, PrimeModulus p);
/// As reduce, but throws BadReduction.
ReducedCurve reduce_or_throw(const CurveOverQ& curve, PrimeModulus p);

struct CountRecord {
  std::string label;
  u64 p;
  u64 count;
  i64 trace;

  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

/// N = p + 1 + sum_x (f(x) / p), using a quadratic-residue table.
/// Throws CapExceeded above `cap`.
CountRecord count_points(const ReducedCurve& curve, u64 cap = kDefaultCountCap);

/// Reference count by direct enumeration of all (x, y); O(p^2).
CountRecord count_points_naive(const ReducedCurve& curve);

struct TorsionProfile {
  u64 p;
  u64 ell;
  unsigned rank;
  /// |E(F_p)[l]| = l^rank.
  u64 kernel_size;
};

/// Dimension of E(F_p)[l], from counting the points P with lP = O.
TorsionProfile ell_torsion_rank(const ReducedCurve& curve, PrimeModulus ell);

bool is_squarefree(i64 d);

/// E^d : y^2 = x^3 + d a2 x^2 + d^2 a4 x + d^3 a6.
CurveOverQ quadratic_twist(const CurveOverQ& curve, i64 d, std::string label = {});

/// Codomain of the 2-isogeny with kernel {O, (0, 0)}; requires a6 = 0.
/// y^2 = x(x^2 + a x + b)  ->  y^2 = x(x^2 - 2a x + (a^2 - 4b)).
CurveOverQ velu_two_isogenous(const CurveOverQ& curve, std::string label = {});

/// T^2 - a_p T + p reduced mod l, stored as (linear, constant) = (-a_p, p).
struct FrobeniusCharpoly {
  FieldElement linear;
  FieldElement constant;

  /// The reversed polynomial 1 - a_p T + p T^2 at T = 1, i.e. N mod l.
  FieldElement reversed_at_one() const;
};

FrobeniusCharpoly charpoly_mod_ell(const CountRecord& rec, PrimeModulus ell);

/// Reads `label : a2 a4 a6` lines; `#` starts a comment. Throws ParseError
/// for malformed lines and SingularCurve for singular models.
std::vector<CurveOverQ> parse_curve_file(std::istream& in);
std::vector<CurveOverQ> read_curve_file(const std::string& path);

/// Append-only text cache of `label p N` lines. A `# curve label a2 a4 a6 <checksum>`
/// line ties each label to the model its counts came from.
class CountCache {
 public:
  static constexpr const char* kHeader = "# isogeny-radical count cache v1";

  /// Missing file loads as empty.
  static CountCache load(const std::string& path);

  /// Throws CacheConflict when `curve.label()` is bound to another model.
  void check_curve(const CurveOverQ& curve) const;
  bool has(const std::string& label, u64 p) const;
  std::optional<u64> get(const std::string& label, u64 p) const;
  std::size_t size() const;
  const std::map<std::string, std::map<u64, u64>>& records() const noexcept { return records_; }

  /// Appends records (and unseen curve lines) to `path` in the given order.
  void append(const std::string& path, const std::vector<CurveOverQ>& curves,
              const std::vector<CountRecord>& fresh);

  static std::string checksum(const CurveOverQ& curve);

 private:
  struct Model {
    i64 a2, a4, a6;
  };
  std::map<std::string, Model> models_;
  std::map<std::string, std::map<u64, u64>> records_;
  bool exists_ = false;
};

}  // namespace isorad
