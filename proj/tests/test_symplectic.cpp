#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "isorad/symplectic.hpp"

using namespace isorad;

namespace {

// <a, b> = a^T J b with J = [[0, I], [-I, 0]]
u64 omega(const std::vector<u64>& a, const std::vector<u64>& b, u64 p) {
  const std::size_t g = a.size() / 2;
  u64 s = 0;
  for (std::size_t i = 0; i < g; ++i) {
    s = add_mod(s, mul_mod(a[i], b[g + i], p), p);
    s = sub_mod(s, mul_mod(a[g + i], b[i], p), p);
  }
  return s;
}

// Counts matrices with M^T J M = J column by column: every candidate in
// (F_p^{2g})^{2g} is covered, branches die as soon as a Gram entry is wrong.
u64 count_symplectic_by_search(std::size_t g, u64 p) {
  const std::size_t n = 2 * g;
  std::vector<std::vector<u64>> vecs;
  u64 total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= p;
  for (u64 k = 0; k < total; ++k) {
    std::vector<u64> v(n);
    u64 r = k;
    for (std::size_t i = 0; i < n; ++i, r /= p) v[i] = r % p;
    vecs.push_back(v);
  }
  const Matrix j = standard_form(g, p);
  std::vector<std::size_t> cols;
  u64 count = 0;
  auto rec = [&](auto&& self) -> void {
    const std::size_t c = cols.size();
    if (c == n) {
      ++count;
      return;
    }
    for (std::size_t k = 0; k < vecs.size(); ++k) {
      bool ok = true;
      for (std::size_t i = 0; i < c && ok; ++i) ok = omega(vecs[cols[i]], vecs[k], p) == j(i, c);
      if (!ok) continue;
      cols.push_back(k);
      self(self);
      cols.pop_back();
    }
  };
  rec(rec);
  return count;
}

u64 count_sl2(u64 p) {
  u64 n = 0;
  for (u64 a = 0; a < p; ++a)
    for (u64 b = 0; b < p; ++b)
      for (u64 c = 0; c < p; ++c)
        for (u64 d = 0; d < p; ++d) n += (a * d + p * p - b * c) % p == 1;
  return n;
}

}  // namespace

TEST_CASE("multiplier_of on standard elements") {
  const PrimeModulus five(5);
  CHECK(multiplier_of(Matrix::identity(4, 5))->residue() == 1);
  CHECK(multiplier_of(standard_form(1, 5))->residue() == 1);
  for (u64 x = 1; x < 7; ++x) CHECK(multiplier_of(Matrix::scalar(4, 7, x))->residue() == x * x % 7);
  // g = 1: every invertible matrix is in GSp_2 with multiplier det
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const Matrix m = Matrix::from_rows(2, 5, {static_cast<i64>(rng.below(5)), static_cast<i64>(rng.below(5)),
                                              static_cast<i64>(rng.below(5)), static_cast<i64>(rng.below(5))});
    if (m.det() == 0) {
      CHECK_THROWS_AS(GspElement{m}, NotSymplectic);
      continue;
    }
    const GspElement e(m);
    CHECK(e.multiplier().residue() == m.det());
    CHECK(det_multiplier_check(e));
  }
  const Matrix bad = Matrix::from_rows(4, 5, {1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  CHECK_FALSE(multiplier_of(bad).has_value());
}

TEST_CASE("GroupSpec validation") {
  CHECK_THROWS_AS(GroupSpec(0, PrimeModulus(5)), Error);
  CHECK_THROWS_AS(GroupSpec(1, PrimeModulus(2)), Error);
  CHECK(GroupSpec(2, PrimeModulus(7)).dim() == 4);
}

TEST_CASE("transvections are symplectic; generators and adjuster") {
  const GroupSpec spec(2, PrimeModulus(7));
  for (const auto& t : sp_generators(spec)) {
    const auto l = multiplier_of(t);
    REQUIRE(l);
    CHECK(l->residue() == 1);
  }
  CHECK(multiplier_of(transvection(2, 7, {1, 2, 3, 4}, 5))->residue() == 1);
  for (u64 l = 1; l < 7; ++l) CHECK(multiplier_of(multiplier_adjuster(spec, l))->residue() == l);
}

TEST_CASE("group orders against brute force") {
  CHECK(count_sl2(3) == 24);
  CHECK(count_sl2(5) == 120);
  CHECK(sp_order(GroupSpec(1, PrimeModulus(3))) == 24);
  CHECK(sp_order(GroupSpec(1, PrimeModulus(5))) == 120);
  CHECK(count_symplectic_by_search(1, 5) == 120);
  const u64 sp4 = count_symplectic_by_search(2, 3);
  CHECK(sp4 == 51840);
  CHECK(sp_order(GroupSpec(2, PrimeModulus(3))) == sp4);
  CHECK_THROWS_AS(sp_order(GroupSpec(4, PrimeModulus(101))), OverflowError);
}

TEST_CASE("ell-Sylow exponent is g^2") {
  for (unsigned g = 1; g <= 3; ++g)
    for (u64 l : {3u, 5u, 7u, 11u}) {
      if (g == 3 && l == 11) continue;  // order exceeds 64 bits
      CHECK(valuation(sp_order(GroupSpec(g, PrimeModulus(l))), l) == g * g);
    }
  CHECK_THROWS_AS(sp_order(GroupSpec(3, PrimeModulus(11))), OverflowError);
}

TEST_CASE("cardinal separation") {
  const PrimeModulus five(5), three(3);
  CHECK(cardinal_separation(1, 1, 1, 1, five));
  CHECK_FALSE(cardinal_separation(1, 1, 1, 2, five));
  for (unsigned z1 : {1u, 2u})
    for (unsigned z2 : {1u, 2u}) CHECK_FALSE(cardinal_separation(1, z1, 2, z2, three));
  for (u64 l : {3u, 5u, 7u}) CHECK(cardinal_separation_holds(3, PrimeModulus(l)));
  for (u64 l : {11u, 13u, 31u}) CHECK(cardinal_separation_holds(2, PrimeModulus(l)));
  CHECK_THROWS_AS(cardinal_separation(1, 3, 1, 1, five), Error);
}

TEST_CASE("enumeration: sizes, identity first, closure, membership") {
  for (auto [g, l] : {std::pair{1u, 3u}, {1u, 5u}, {1u, 7u}, {2u, 3u}}) {
    const GroupSpec spec(g, PrimeModulus(l));
    const auto sp = enumerate_sp(spec);
    CHECK(sp.size() == sp_order(spec));
    CHECK(sp.elements().front().is_identity());
    std::set<u64> codes;
    for (const auto& m : sp.elements()) {
      const auto lam = multiplier_of(m);
      REQUIRE(lam);
      CHECK(lam->residue() == 1);
      codes.insert(m.code());
    }
    CHECK(codes.size() == sp.size());
  }
  const auto sp = enumerate_sp(GroupSpec(1, PrimeModulus(5)));
  Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    const auto a = static_cast<std::uint32_t>(rng.below(sp.size()));
    const auto b = static_cast<std::uint32_t>(rng.below(sp.size()));
    CHECK(sp.elements()[sp.product(a, b)] == sp.elements()[a] * sp.elements()[b]);
  }
  CHECK_FALSE(sp.contains(Matrix::scalar(2, 5, 2)));
  CHECK_THROWS_AS(enumerate_sp(GroupSpec(2, PrimeModulus(5)), 1000), CapExceeded);
}

TEST_CASE("conjugacy classes") {
  // SL_2(F_q), q odd, has q + 4 classes; Sp_4(F_3) has 34
  for (u64 q : {3u, 5u, 7u}) CHECK(conjugacy_classes(enumerate_sp(GroupSpec(1, PrimeModulus(q)))).size() == q + 4);
  const auto sp = enumerate_sp(GroupSpec(1, PrimeModulus(5)));
  const auto cls = conjugacy_classes(sp);
  CHECK(cls.front().size() == 1);
  std::size_t total = 0;
  for (const auto& c : cls) {
    total += c.size();
    CHECK(120 % c.size() == 0);
  }
  CHECK(total == 120);
}

TEST_CASE("normal subgroups") {
  CHECK(normal_subgroup_audit(enumerate_sp(GroupSpec(1, PrimeModulus(5)))) == std::vector<u64>{1, 2, 120});
  CHECK(normal_subgroup_audit(enumerate_sp(GroupSpec(1, PrimeModulus(7)))) == std::vector<u64>{1, 2, 336});
  CHECK(normal_subgroup_audit(enumerate_sp(GroupSpec(1, PrimeModulus(3)))) == std::vector<u64>{1, 2, 8, 24});
  CHECK(is_excluded_simplicity_case(GroupSpec(1, PrimeModulus(3))));
  CHECK_FALSE(is_excluded_simplicity_case(GroupSpec(2, PrimeModulus(3))));
  CHECK_FALSE(is_excluded_simplicity_case(GroupSpec(1, PrimeModulus(5))));
}

TEST_CASE("random elements: multiplier laws as properties") {
  for (auto [g, l] : {std::pair{1u, 5u}, {2u, 7u}, {3u, 11u}}) {
    const GroupSpec spec(g, PrimeModulus(l));
    Rng rng(100 + g);
    for (int t = 0; t < 300; ++t) {
      const FieldElement a(1 + rng.below(l - 1), spec.ell), b(1 + rng.below(l - 1), spec.ell);
      const GspElement m = random_gsp_element(spec, a, rng);
      const GspElement n = random_gsp_element(spec, b, rng);
      CHECK(m.multiplier() == a);
      CHECK((m * n).multiplier() == a * b);
      CHECK(det_multiplier_check(m));
      CHECK(det_multiplier_check(m * n));
      CHECK((m * m.inverse()).matrix().is_identity());
      CHECK(m.inverse().multiplier() == mod_inv(a));
    }
  }
  const GroupSpec spec(2, PrimeModulus(5));
  CHECK(random_gsp_element(spec, FieldElement(1, spec.ell), 9, 0).matrix().is_identity());
  CHECK(random_gsp_element(spec, FieldElement(3, spec.ell), 9) == random_gsp_element(spec, FieldElement(3, spec.ell), 9));
}

TEST_CASE("random words reach the whole of Sp_2(F_5)") {
  const GroupSpec spec(1, PrimeModulus(5));
  std::set<u64> seen;
  for (u64 s = 0; s < 20000 && seen.size() < 120; ++s)
    seen.insert(random_gsp_element(spec, FieldElement(1, spec.ell), s).matrix().code());
  CHECK(seen.size() == 120);
}
