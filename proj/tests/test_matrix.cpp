#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "isorad/matrix.hpp"

using namespace isorad;

namespace {

Matrix random_matrix(std::size_t n, u64 p, Rng& rng) {
  Matrix m(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, rng.below(p));
  return m;
}

// Leibniz expansion, independent of elimination
u64 det_leibniz(const Matrix& m) {
  const std::size_t n = m.dim();
  const u64 p = m.modulus();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  u64 total = 0;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    u64 term = 1;
    for (std::size_t i = 0; i < n; ++i) term = mul_mod(term, m(i, perm[i]), p);
    total = inversions % 2 ? sub_mod(total, term, p) : add_mod(total, term, p);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

TEST_CASE("determinant matches Leibniz expansion") {
  Rng rng(3);
  for (u64 p : {3u, 5u, 7u, 65537u, 4294967291u}) {
    for (std::size_t n = 1; n <= 5; ++n) {
      for (int t = 0; t < 10; ++t) {
        const Matrix m = random_matrix(n, p, rng);
        CHECK(m.det() == det_leibniz(m));
      }
    }
  }
}

TEST_CASE("inverse, product, transpose") {
  Rng rng(5);
  for (u64 p : {5u, 11u, 4294967291u}) {
    for (int t = 0; t < 20; ++t) {
      const Matrix m = random_matrix(4, p, rng);
      const Matrix n = random_matrix(4, p, rng);
      CHECK((m * n).det() == mul_mod(m.det(), n.det(), p));
      CHECK((m * n).transpose() == n.transpose() * m.transpose());
      if (m.det() != 0) {
        CHECK((m * m.inverse()).is_identity());
        CHECK((m.inverse() * m).is_identity());
      } else {
        CHECK_THROWS_AS(m.inverse(), Error);
      }
    }
  }
}

TEST_CASE("charpoly: constant term and trace, and Cayley-Hamilton") {
  Rng rng(9);
  for (u64 p : {3u, 7u, 101u}) {
    for (std::size_t n = 1; n <= 6; ++n) {
      const Matrix m = random_matrix(n, p, rng);
      const auto c = m.charpoly();
      REQUIRE(c.size() == n + 1);
      CHECK(c[n] == 1);
      const u64 det_neg = n % 2 ? (p - m.det()) % p : m.det();
      CHECK(c[0] == det_neg);
      u64 tr = 0;
      for (std::size_t i = 0; i < n; ++i) tr = add_mod(tr, m(i, i), p);
      CHECK(c[n - 1] == (p - tr) % p);
      // sum c_k M^k == 0
      Matrix acc(n, p), power = Matrix::identity(n, p);
      for (std::size_t k = 0; k <= n; ++k) {
        acc = acc + power.scaled(c[k]);
        power = power * m;
      }
      CHECK(acc == Matrix(n, p));
    }
  }
}

TEST_CASE("from_rows reduces signed entries; scalar and standard form") {
  const Matrix m = Matrix::from_rows(2, 5, {-1, 6, 0, -5});
  CHECK(m(0, 0) == 4);
  CHECK(m(0, 1) == 1);
  CHECK(m(1, 1) == 0);
  CHECK(Matrix::scalar(3, 7, 3).is_scalar(3));
  const Matrix j = standard_form(2, 7);
  CHECK(j(0, 2) == 1);
  CHECK(j(2, 0) == 6);
  CHECK((j * j).is_scalar(6));
  CHECK_THROWS_AS(Matrix(2, 5) * Matrix(2, 7), Error);
}

TEST_CASE("codes are injective on a small space") {
  CHECK(Matrix::code_fits(2, 5));
  CHECK_FALSE(Matrix::code_fits(8, 11));
  std::set<u64> seen;
  for (u64 k = 0; k < 625; ++k) {
    Matrix m(2, 5);
    u64 r = k;
    for (std::size_t i = 0; i < 4; ++i, r /= 5) m.set(i / 2, i % 2, r % 5);
    seen.insert(m.code());
  }
  CHECK(seen.size() == 625);
}
