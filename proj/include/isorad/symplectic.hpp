#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "isorad/matrix.hpp"
#include "isorad/modmath.hpp"

namespace isorad {

/// A matrix is not in GSp_{2g}.
class NotSymplectic : public Error {
 public:
  using Error::Error;
};

/// Parameters (g, l) of GSp_{2g}(F_l); g >= 1 and l an odd prime.
struct GroupSpec {
  GroupSpec(unsigned g, PrimeModulus ell);

  unsigned g;
  PrimeModulus ell;

  std::size_t dim() const noexcept { return 2 * static_cast<std::size_t>(g); }
  u64 modulus() const noexcept { return ell.value(); }
  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// The multiplier l with M^T J M = l J, or nullopt when M is not in GSp.
std::optional<FieldElement> multiplier_of(const Matrix& m);

/// An element of GSp_{2g}(F_l) together with its multiplier.
class GspElement {
 public:
  /// Throws NotSymplectic unless M^T J M = l J with l != 0.
  explicit GspElement(Matrix m);

  const Matrix& matrix() const noexcept { return m_; }
  FieldElement multiplier() const noexcept { return lambda_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  unsigned g() const noexcept { return static_cast<unsigned>(m_.dim() / 2); }

  GspElement operator*(const GspElement& o) const { return GspElement(m_ * o.m_); }
  /// M^{-1} = l^{-1} J^{-1} M^T J.
  GspElement inverse() const;

  friend bool operator==(const GspElement& a, const GspElement& b) { return a.m_ == b.m_; }

 private:
  Matrix m_;
  FieldElement lambda_;
};

/// det(M) == multiplier(M)^g.
bool det_multiplier_check(const GspElement& m);

/// diag(I_g, l I_g), an element of multiplier l.
Matrix multiplier_adjuster(const GroupSpec& spec, u64 lambda);

/// Symplectic transvection x -> x + c <x, v> v, as the matrix I + c v v^T J.
Matrix transvection(std::size_t g, u64 modulus, const std::vector<u64>& v, u64 c);

/// Transvections along e_i and e_i + e_j; they generate Sp_{2g}(F_l).
std::vector<Matrix> sp_generators(const GroupSpec& spec);

/// |Sp_{2g}(F_l)| = l^{g^2} prod_{i=1..g} (l^{2i} - 1). Throws OverflowError.
u64 sp_order(const GroupSpec& spec);

/// Whether |Sp_{2g1}/Z1| == |Sp_{2g2}/Z2| for central subgroups of orders z1, z2 in {1, 2}.
bool cardinal_separation(unsigned g1, unsigned z1, unsigned g2, unsigned z2, PrimeModulus ell);

/// Scans g1, g2 <= g_max and z1, z2 in {1,2}; true when equal quotient
/// orders always force g1 == g2 and z1 == z2.
bool cardinal_separation_holds(unsigned g_max, PrimeModulus ell);

inline constexpr u64 kDefaultEnumerationCap = 1'000'000;

/// Explicit element list of a subgroup of GL_{2g}(F_l), identity first.
class SubgroupEnumeration {
 public:
  SubgroupEnumeration(GroupSpec spec, std::vector<Matrix> elements);

  const GroupSpec& spec() const noexcept { return spec_; }
  const std::vector<Matrix>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }

  /// Index of `m` in the enumeration, or nullopt.
  std::optional<std::uint32_t> index_of(const Matrix& m) const;
  bool contains(const Matrix& m) const { return index_of(m).has_value(); }
  std::uint32_t product(std::uint32_t a, std::uint32_t b) const;

 private:
  GroupSpec spec_;
  std::vector<Matrix> elements_;
  std::unordered_map<u64, std::uint32_t> index_;
};

/// All of Sp_{2g}(F_l) by breadth-first closure over the transvection
/// generators. Throws CapExceeded when |Sp| > cap.
SubgroupEnumeration enumerate_sp(const GroupSpec& spec, u64 cap = kDefaultEnumerationCap);

/// Conjugacy classes as lists of element indices; class 0 is {identity}.
std::vector<std::vector<std::uint32_t>> conjugacy_classes(const SubgroupEnumeration& group);

/// Orders of all normal subgroups, ascending (including 1 and |G|).
std::vector<u64> normal_subgroup_audit(const SubgroupEnumeration& group);

/// True for the parameters where Sp_{2g}(F_l) is known to have normal
/// subgroups beyond its center (g = 1, l = 3 among odd l).
bool is_excluded_simplicity_case(const GroupSpec& spec);

inline constexpr unsigned kDefaultWordLength = 64;

/// (random word of symplectic transvections) * multiplier_adjuster(target).
GspElement random_gsp_element(const GroupSpec& spec, const FieldElement& target, Rng& rng,
                              unsigned word_length = kDefaultWordLength);
GspElement random_gsp_element(const GroupSpec& spec, const FieldElement& target, u64 seed,
                              unsigned word_length = kDefaultWordLength);

}  // namespace isorad
