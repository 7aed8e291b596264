#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "isorad/criterion.hpp"

using namespace isorad;

namespace {

// #E(F_p) by Euler's criterion per x; independent of the library's QR table
u64 euler_count(const CurveOverQ& e, u64 p) {
  const u64 a = reduce_signed(e.a2(), p), b = reduce_signed(e.a4(), p), c = reduce_signed(e.a6(), p);
  u64 n = 1;
  for (u64 x = 0; x < p; ++x) {
    const u64 f = (mul_mod(mul_mod(x, x, p), add_mod(x, a, p), p) + mul_mod(b, x, p) + c) % p;
    if (f == 0)
      n += 1;
    else if (pow_mod(f, (p - 1) / 2, p) == 1)
      n += 2;
  }
  return n;
}

bool bad_at(const CurveOverQ& e, u64 p) { return reduce_signed(e.discriminant(), p) == 0; }

struct Cell {
  u64 p, ell;
  int side;
  bool operator==(const Cell&) const = default;
};

std::vector<Cell> full_matrix_witnesses(const CurveOverQ& e1, const CurveOverQ& e2, u64 pmax,
                                        const std::vector<u64>& ells) {
  std::vector<Cell> out;
  for (u64 p = 5; p <= pmax; ++p) {
    bool prime = true;
    for (u64 d = 2; d * d <= p && prime; ++d) prime = p % d != 0;
    if (!prime || bad_at(e1, p) || bad_at(e2, p)) continue;
    const u64 n1 = euler_count(e1, p), n2 = euler_count(e2, p);
    for (u64 l : ells) {
      const bool a = n1 % l == 0, b = n2 % l == 0;
      if (a != b) out.push_back({p, l, a ? 1 : 2});
    }
  }
  return out;
}

CriterionConfig cfg(u64 pmax) {
  CriterionConfig c;
  c.p_max = pmax;
  for (u64 l : {13u, 3u, 7u, 5u, 11u, 3u}) c.lambda_set.emplace_back(l);
  return c;
}

const CurveOverQ kE("E", 0, 1, 1);
const CurveOverQ kF("F", 0, 2, 1);

}  // namespace

TEST_CASE("config validation") {
  CriterionConfig c;
  CHECK_THROWS(c.validate());
  c.lambda_set = {PrimeModulus(2)};
  CHECK_THROWS(c.validate());
  c = cfg(4);
  CHECK_THROWS(c.validate());
  CHECK(cfg(10).sorted_lambda() == std::vector<u64>{3, 5, 7, 11, 13});
}

TEST_CASE("identical curves are consistent") {
  const auto v = run_criterion(kE, kE, cfg(3000));
  CHECK_FALSE(v.is_witness());
  CHECK(v.all_witnesses.empty());
  for (const auto& row : v.summary) {
    CHECK(row.only_first == 0);
    CHECK(row.only_second == 0);
    CHECK(row.both + row.neither == v.places_scanned);
  }
  CHECK(v.skipped == std::vector<u64>{31});
}

TEST_CASE("Velu pair is consistent up to 10^4") {
  const CurveOverQ a("V1", 1, 2, 0);
  const auto v = run_criterion(a, velu_two_isogenous(a), cfg(10000));
  CHECK_FALSE(v.is_witness());
  CHECK(v.lambda == std::vector<u64>{3, 5, 7, 11, 13});
}

TEST_CASE("witness equals the lexicographic minimum of the full matrix") {
  const std::vector<u64> ells{3, 5, 7, 11, 13};
  const auto ref = full_matrix_witnesses(kE, kF, 2000, ells);
  REQUIRE_FALSE(ref.empty());
  const auto v = run_criterion(kE, kF, cfg(2000));
  REQUIRE(v.is_witness());
  CHECK(v.witness->p == ref.front().p);
  CHECK(v.witness->ell == ref.front().ell);
  CHECK(v.witness->side() == ref.front().side);
  REQUIRE(v.all_witnesses.size() == ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k) {
    CHECK(v.all_witnesses[k].p == ref[k].p);
    CHECK(v.all_witnesses[k].ell == ref[k].ell);
  }
  // swapping the curves flips the side but not the cell
  const auto w = run_criterion(kF, kE, cfg(2000));
  CHECK(w.witness->p == v.witness->p);
  CHECK(w.witness->side() == 3 - v.witness->side());
}

TEST_CASE("serial and parallel tables agree") {
  auto c = cfg(3000);
  const auto a = coincidence_matrix(kE, kF, c);
  c.parallel = false;
  const auto b = coincidence_matrix(kE, kF, c);
  CHECK(a.places == b.places);
  CHECK(a.cells == b.cells);
  CHECK(a.counts_first == b.counts_first);
}

TEST_CASE("excluded places and empty scans") {
  auto c = cfg(10);
  c.excluded_places = {5, 7};
  CHECK_THROWS_AS(run_criterion(kE, kF, c), EmptyScan);
  c = cfg(2000);
  c.excluded_places = {5};
  const auto v = run_criterion(kE, kF, c);
  CHECK(v.witness->p != 5);
}

TEST_CASE("splitting places: full l-torsion") {
  const auto sp = splitting_places(kE, PrimeModulus(3), 3000);
  REQUIRE_FALSE(sp.empty());
  for (u64 p : sp) {
    const u64 n = euler_count(kE, p);
    CHECK(n % 9 == 0);
    CHECK(p % 3 == 1);
    CHECK(((static_cast<i64>(p + 1) - static_cast<i64>(n)) % 3 + 3) % 3 == 2);
  }
  CHECK(splitting_places(kE, PrimeModulus(3), 3000, false) == sp);
}

TEST_CASE("twist experiment at l = 3, d = -1") {
  const auto r = twist_witness_experiment(kE, -1, PrimeModulus(3), 10000);
  CHECK(r.all_congruent);
  CHECK(r.all_witnesses);
  for (const auto& t : r.selected) {
    CHECK(t.p % 4 == 3);
    CHECK(t.count % 3 == 0);
    CHECK(t.twist_count % 3 == 1);
    CHECK(euler_count(quadratic_twist(kE, -1), t.p) == t.twist_count);
  }
  CHECK(r.survival_fraction() <= 1.0);
  CHECK_THROWS(twist_witness_experiment(kE, 4, PrimeModulus(3), 100));
  CHECK_THROWS(twist_witness_experiment(kE, 1, PrimeModulus(3), 100));
}

TEST_CASE("about half of the splitting places survive the (d/p) = -1 filter") {
  const auto r = twist_witness_experiment(kE, -1, PrimeModulus(3), 10000);
  REQUIRE(r.splitting.size() >= 20);
  CHECK(r.survival_fraction() >= 0.35);
  CHECK(r.survival_fraction() <= 0.65);
}

TEST_CASE("twist pair at l = 5 has an xor cell when a selected place exists") {
  const auto r = twist_witness_experiment(kE, -1, PrimeModulus(5), 10000);
  CriterionConfig c;
  c.p_max = 10000;
  c.lambda_set = {PrimeModulus(5)};
  const auto v = run_criterion(kE, quadratic_twist(kE, -1), c);
  if (!r.selected.empty()) {
    REQUIRE(v.is_witness());
    for (const auto& t : r.selected) {
      bool found = false;
      for (const auto& w : v.all_witnesses) found = found || (w.p == t.p && w.ell == 5 && w.side() == 1);
      CHECK(found);
    }
  }
}

TEST_CASE("monotonicity: enlarging the window keeps a witness") {
  const std::vector<std::pair<CurveOverQ, CurveOverQ>> pairs{
      {kE, kF}, {kE, quadratic_twist(kE, -1)}, {CurveOverQ("A", 1, 2, 0), CurveOverQ("B", 0, 3, 2)}};
  for (const auto& [a, b] : pairs) {
    CriterionConfig small;
    small.p_max = 200;
    small.lambda_set = {PrimeModulus(3)};
    const auto v1 = run_criterion(a, b, small);
    CriterionConfig big = small;
    big.p_max = 4000;
    big.lambda_set = {PrimeModulus(3), PrimeModulus(7)};
    const auto v2 = run_criterion(a, b, big);
    if (v1.is_witness()) CHECK(v2.is_witness());
    // the small window's witnesses reappear in the large one
    for (const auto& w : v1.all_witnesses)
      CHECK(std::find(v2.all_witnesses.begin(), v2.all_witnesses.end(), w) != v2.all_witnesses.end());
  }
}
