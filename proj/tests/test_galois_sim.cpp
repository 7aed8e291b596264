#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "isorad/galois_sim.hpp"

using namespace isorad;

namespace {

const GroupSpec kSpec(1, PrimeModulus(5));

GspElement some_u(u64 seed = 4) { return random_gsp_element(kSpec, FieldElement(2, kSpec.ell), seed); }

Matrix minus_identity(std::size_t n, u64 p) { return Matrix::scalar(n, p, p - 1); }

// Number of elements of Sp(g=1, l) times D(lambda) with eigenvalue 1,
// counted directly on all 2x2 matrices of the given determinant.
u64 eigen_one_count(u64 p, u64 lambda) {
  u64 n = 0;
  for (u64 a = 0; a < p; ++a)
    for (u64 b = 0; b < p; ++b)
      for (u64 c = 0; c < p; ++c)
        for (u64 d = 0; d < p; ++d) {
          if ((a * d + p * p - b * c) % p != lambda) continue;
          n += ((a + p - 1) * (d + p - 1) + p * p - b * c) % p == 0;
        }
  return n;
}

}  // namespace

TEST_CASE("model images") {
  const GspElement id(Matrix::identity(2, 5));
  const auto g = JointImageModel::graph(id);
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Matrix x = random_gsp_element(kSpec, FieldElement(3, kSpec.ell), rng).matrix();
    CHECK(g.image(x) == x);
  }
  const auto tw = JointImageModel::twist(some_u(), EpsilonLaw::AlwaysMinus);
  CHECK(tw.image(Matrix::identity(2, 5), -1) == minus_identity(2, 5));
  CHECK(tw.has_sign_flip());
  CHECK_FALSE(JointImageModel::twist(some_u(), EpsilonLaw::AlwaysPlus).has_sign_flip());
  CHECK_THROWS(JointImageModel::product(kSpec).conjugator());
}

TEST_CASE("membership") {
  const auto u = some_u();
  const auto g = JointImageModel::graph(u);
  const auto tw = JointImageModel::twist(u);
  const auto pr = JointImageModel::product(kSpec);
  const Matrix x = random_gsp_element(kSpec, FieldElement(3, kSpec.ell), 8).matrix();
  const Matrix y = g.image(x);
  CHECK(g.contains(x, y));
  CHECK_FALSE(g.contains(x, y.scaled(4)));
  CHECK(tw.contains(x, y.scaled(4)));
  CHECK(pr.contains(minus_identity(2, 5), Matrix::identity(2, 5)));
  // multipliers must match
  CHECK_FALSE(pr.contains(Matrix::identity(2, 5), multiplier_adjuster(kSpec, 2)));
}

TEST_CASE("samples carry the requested multiplier and satisfy the model") {
  const auto tw = JointImageModel::twist(some_u(), EpsilonLaw::Uniform);
  Rng rng(3);
  int minus = 0;
  for (int t = 0; t < 400; ++t) {
    const FieldElement l(1 + rng.below(4), kSpec.ell);
    const auto s = sample_frobenius(tw, l, rng);
    CHECK(s.x.multiplier() == l);
    CHECK(s.y.multiplier() == l);
    CHECK(s.y.matrix() == tw.image(s.x.matrix(), s.epsilon));
    minus += s.epsilon == -1;
  }
  CHECK(minus > 120);
  CHECK(minus < 280);
}

TEST_CASE("det coincidence: graph holds exhaustively") {
  for (u64 seed : {1u, 2u, 3u}) {
    const auto rep = check_det_coincidence(JointImageModel::graph(some_u(seed)));
    CHECK(rep.exhaustive);
    CHECK(rep.pairs == 480);
    CHECK(rep.holds());
    CHECK(rep.rate() == 1.0);
    CHECK_FALSE(rep.counterexample);
  }
}

TEST_CASE("det coincidence: twist fails at (I, -I)") {
  const auto rep = check_det_coincidence(JointImageModel::twist(some_u(), EpsilonLaw::Uniform));
  REQUIRE(rep.counterexample);
  CHECK(rep.counterexample->first.is_identity());
  CHECK(rep.counterexample->second == minus_identity(2, 5));
  CHECK((minus_identity(2, 5) - Matrix::identity(2, 5)).det() == 4);
  CHECK(check_det_coincidence(JointImageModel::twist(some_u(), EpsilonLaw::AlwaysPlus)).holds());
}

TEST_CASE("det coincidence: product fraction matches a direct count") {
  const auto rep = check_det_coincidence(JointImageModel::product(kSpec));
  REQUIRE(rep.classes.size() == 4);
  u64 total = 0;
  for (const auto& c : rep.classes) {
    const u64 a = eigen_one_count(5, c.multiplier);
    CHECK(c.pairs == 120 * 120);
    CHECK(c.violations == 2 * a * (120 - a));
    total += c.violations;
  }
  CHECK(eigen_one_count(5, 1) == 25);
  CHECK(rep.violations == total);
  CHECK(rep.pairs == 4 * 14400);
}

TEST_CASE("sampled mode is reproducible and parallel agrees with serial") {
  const GroupSpec spec(2, PrimeModulus(5));
  const auto tw = JointImageModel::twist(random_gsp_element(spec, FieldElement(2, spec.ell), 1));
  CoincidenceOptions o;
  o.exhaustive = false;
  o.trials = 2000;
  o.seed = 77;
  const auto a = check_det_coincidence(tw, o);
  o.parallel = false;
  const auto b = check_det_coincidence(tw, o);
  CHECK(a.pairs == 2000);
  CHECK(a.violations == b.violations);
  CHECK(a.counterexample == b.counterexample);
  CHECK(a.violations > 0);
  CHECK(check_det_coincidence(JointImageModel::graph(random_gsp_element(spec, FieldElement(2, spec.ell), 1)), o).holds());
}

TEST_CASE("exhaustive policy and caps") {
  CHECK(exhaustive_by_default(GroupSpec(1, PrimeModulus(11))));
  CHECK_FALSE(exhaustive_by_default(GroupSpec(2, PrimeModulus(3))));
  CoincidenceOptions o;
  o.pair_cap = 100;
  CHECK_THROWS_AS(check_det_coincidence(JointImageModel::product(kSpec), o), CapExceeded);
}

TEST_CASE("projected kernels and Goursat") {
  const auto g = JointImageModel::graph(some_u());
  const auto k = projected_kernel_audit(g);
  CHECK(k.order == 1);
  CHECK_FALSE(k.contains_minus_identity);

  const auto tw = JointImageModel::twist(some_u());
  const auto kt = projected_kernel_audit(tw);
  CHECK(kt.order == 2);
  CHECK(kt.contains_minus_identity);
  CHECK(kt.is_sp_subgroup);
  std::set<Matrix> els(kt.elements.begin(), kt.elements.end());
  CHECK(els == std::set<Matrix>{Matrix::identity(2, 5), minus_identity(2, 5)});

  const auto kp = projected_kernel_audit(JointImageModel::product(kSpec));
  CHECK(kp.order == 120);
  CHECK(kp.contains_minus_identity);
  CHECK(kp.is_sp_subgroup);

  auto gr = goursat_degrees(g);
  CHECK(gr.ker_pi1_order == 1);
  CHECK(gr.ker_pi2_order == 1);
  CHECK(gr.dichotomy == Dichotomy::EqualFields);
  CHECK_FALSE(gr.within_kernel_bound);
  gr = goursat_degrees(tw);
  CHECK(gr.ker_pi1_order == 2);
  CHECK(gr.ker_pi2_order == 2);
  CHECK(gr.dichotomy == Dichotomy::IndexTwo);
  auto pr = JointImageModel::product(kSpec);
  pr.kernel_bound = 2;
  gr = goursat_degrees(pr);
  CHECK(gr.ker_pi1_order == 120);
  CHECK(gr.dichotomy == Dichotomy::Violated);
  REQUIRE(gr.within_kernel_bound);
  CHECK_FALSE(*gr.within_kernel_bound);
}

TEST_CASE("twist congruence 2^{2g}") {
  for (auto [g, l] : {std::pair{1u, 5u}, {1u, 7u}, {2u, 3u}, {2u, 5u}, {3u, 7u}}) {
    const GroupSpec spec(g, PrimeModulus(l));
    const auto tw = JointImageModel::twist(random_gsp_element(spec, FieldElement(1, spec.ell), 1));
    const auto c = step3_congruence_experiment(tw);
    CHECK(c.verified);
    CHECK(c.nonzero);
    CHECK(c.det_value == pow_mod(2, 2 * g, l));
  }
  CHECK_THROWS(step3_congruence_experiment(JointImageModel::graph(some_u())));
}
