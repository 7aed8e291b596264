#include "isorad/galois_sim.hpp"

#include <omp.h>

#include <limits>
#include <unordered_set>

#include "isorad/kernels.hpp"

namespace isorad {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::GraphOfConjugation: return "graph";
    case ModelKind::QuadraticTwistGraph: return "twist";
    case ModelKind::FullFiberedProduct: return "product";
  }
  return "?";
}

std::string to_string(Dichotomy d) {
  switch (d) {
    case Dichotomy::EqualFields: return "EqualFields";
    case Dichotomy::IndexTwo: return "IndexTwo";
    case Dichotomy::Violated: return "Violated";
  }
  return "?";
}

JointImageModel::JointImageModel(ModelKind kind, GroupSpec first, GroupSpec second, std::optional<GspElement> u,
                                 EpsilonLaw law)
    : kind_(kind), first_(first), second_(second), u_(std::move(u)), law_(law) {
  if (first_.ell != second_.ell) throw Error("both factors must live over the same F_l");
  if (u_) u_inv_ = u_->inverse().matrix();
}

JointImageModel JointImageModel::graph(const GspElement& u) {
  GroupSpec spec(u.g(), PrimeModulus(u.matrix().modulus()));
  return JointImageModel(ModelKind::GraphOfConjugation, spec, spec, u, EpsilonLaw::AlwaysPlus);
}

JointImageModel JointImageModel::twist(const GspElement& u, EpsilonLaw law) {
  GroupSpec spec(u.g(), PrimeModulus(u.matrix().modulus()));
  return JointImageModel(ModelKind::QuadraticTwistGraph, spec, spec, u, law);
}

JointImageModel JointImageModel::product(const GroupSpec& first, const GroupSpec& second) {
  return JointImageModel(ModelKind::FullFiberedProduct, first, second, std::nullopt, EpsilonLaw::AlwaysPlus);
}

const GspElement& JointImageModel::conjugator() const {
  if (!u_) throw Error("the fibered product has no conjugator");
  return *u_;
}

Matrix JointImageModel::image(const Matrix& x, int epsilon) const {
  if (!u_) throw Error("the fibered product is not a graph");
  Matrix y = *u_inv_ * x * u_->matrix();
  return epsilon < 0 ? y.scaled(x.modulus() - 1) : y;
}

bool JointImageModel::contains(const Matrix& x, const Matrix& y) const {
  if (x.dim() != first_.dim() || y.dim() != second_.dim()) return false;
  const auto lx = multiplier_of(x);
  const auto ly = multiplier_of(y);
  if (!lx || !ly || *lx != *ly) return false;
  if (kind_ == ModelKind::FullFiberedProduct) return true;
  const Matrix img = image(x);
  if (y == img) return true;
  return has_sign_flip() && y == img.scaled(x.modulus() - 1);
}

FrobeniusSample sample_frobenius(const JointImageModel& model, const FieldElement& p_residue, Rng& rng,
                                 unsigned word_length) {
  if (p_residue.is_zero()) throw Error("Frobenius multiplier must be nonzero");
  GspElement x = random_gsp_element(model.first(), p_residue, rng, word_length);
  int epsilon = 1;
  switch (model.kind()) {
    case ModelKind::GraphOfConjugation:
      return {x, GspElement(model.image(x.matrix())), p_residue, 1};
    case ModelKind::QuadraticTwistGraph:
      if (model.epsilon_law() == EpsilonLaw::AlwaysMinus) epsilon = -1;
      if (model.epsilon_law() == EpsilonLaw::Uniform) epsilon = rng.below(2) ? -1 : 1;
      return {x, GspElement(model.image(x.matrix(), epsilon)), p_residue, epsilon};
    case ModelKind::FullFiberedProduct: {
      GspElement y = random_gsp_element(model.second(), p_residue, rng, word_length);
      return {std::move(x), std::move(y), p_residue, 1};
    }
  }
  throw Error("unknown model");
}

FrobeniusSample sample_frobenius(const JointImageModel& model, const FieldElement& p_residue, u64 seed,
                                 unsigned word_length) {
  Rng rng(seed);
  return sample_frobenius(model, p_residue, rng, word_length);
}

bool has_eigenvalue_one(const Matrix& m) { return (m - Matrix::identity(m.dim(), m.modulus())).det() == 0; }

bool exhaustive_by_default(const GroupSpec& spec, u64 pair_cap) {
  u64 order;
  try {
    order = sp_order(spec);
  } catch (const OverflowError&) {
    return false;
  }
  if (order > kDefaultEnumerationCap) return false;
  return static_cast<u128>(order) * order <= pair_cap;
}

namespace {

u64 pairs_per_class(const JointImageModel& model, u64 n) {
  switch (model.kind()) {
    case ModelKind::GraphOfConjugation: return n;
    case ModelKind::QuadraticTwistGraph: return model.has_sign_flip() ? 2 * n : n;
    case ModelKind::FullFiberedProduct: return static_cast<u128>(n) * n > ~u64{0} ? ~u64{0} : n * n;
  }
  return n;
}

std::vector<int> epsilon_values(const JointImageModel& model) {
  if (model.kind() != ModelKind::QuadraticTwistGraph) return {1};
  switch (model.epsilon_law()) {
    case EpsilonLaw::AlwaysPlus: return {1};
    case EpsilonLaw::AlwaysMinus:
    case EpsilonLaw::Uniform: return {1, -1};
  }
  return {1};
}

std::vector<std::uint8_t> eigen_flags(const std::vector<Matrix>& xs, bool parallel) {
  std::vector<std::uint8_t> f(xs.size());
  const auto n = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) f[i] = has_eigenvalue_one(xs[i]);
  return f;
}

CoincidenceReport exhaustive_coincidence(const JointImageModel& model, const CoincidenceOptions& opts) {
  const GroupSpec& spec = model.first();
  if (sp_order(spec) > opts.enumeration_cap) throw CapExceeded("|Sp| exceeds the enumeration cap");
  const u64 per_class = pairs_per_class(model, sp_order(spec));
  if (per_class > opts.pair_cap)
    throw CapExceeded(std::to_string(per_class) + " pairs per multiplier class exceed the cap " +
                      std::to_string(opts.pair_cap));
  const SubgroupEnumeration sp = enumerate_sp(spec, opts.enumeration_cap);
  const auto eps = epsilon_values(model);
  const u64 p = spec.modulus();

  CoincidenceReport report;
  report.exhaustive = true;
  for (u64 lambda = 1; lambda < p; ++lambda) {
    const Matrix d = multiplier_adjuster(spec, lambda);
    std::vector<Matrix> xs;
    xs.reserve(sp.size());
    for (const auto& s : sp.elements()) xs.push_back(s * d);
    const auto fx = eigen_flags(xs, opts.parallel);

    kernels::MismatchScan scan;
    std::vector<Matrix> ys;
    if (model.kind() == ModelKind::FullFiberedProduct) {
      scan = opts.parallel ? kernels::scan_product_parallel(fx, fx) : kernels::scan_product_serial(fx, fx);
    } else {
      ys.reserve(xs.size() * eps.size());
      for (const auto& x : xs)
        for (int e : eps) ys.push_back(model.image(x, e));
      const auto fy = eigen_flags(ys, opts.parallel);
      scan = opts.parallel ? kernels::scan_aligned_parallel(fx, fy, eps.size())
                           : kernels::scan_aligned_serial(fx, fy, eps.size());
    }
    report.pairs += scan.pairs;
    report.violations += scan.mismatches;
    report.classes.push_back({lambda, scan.pairs, scan.mismatches});
    if (scan.first && !report.counterexample) {
      const auto [i, j] = *scan.first;
      if (model.kind() == ModelKind::FullFiberedProduct)
        report.counterexample = {xs[i], xs[j]};
      else
        report.counterexample = {xs[i], ys[i * eps.size() + j]};
    }
  }
  return report;
}

CoincidenceReport sampled_coincidence(const JointImageModel& model, const CoincidenceOptions& opts) {
  const u64 p = model.first().modulus();
  const PrimeModulus ell = model.first().ell;
  const auto trials = static_cast<std::int64_t>(opts.trials);
  std::vector<std::uint8_t> violated(opts.trials);
  std::vector<u64> multiplier(opts.trials);
  // Each trial owns a generator derived from (seed, index), so results do
  // not depend on the thread count.
#pragma omp parallel for schedule(static) if (opts.parallel)
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng(splitmix64(opts.seed ^ splitmix64(static_cast<u64>(t))));
    const FieldElement lambda(1 + rng.below(p - 1), ell);
    const FrobeniusSample s = sample_frobenius(model, lambda, rng);
    multiplier[t] = lambda.residue();
    violated[t] = has_eigenvalue_one(s.x.matrix()) != has_eigenvalue_one(s.y.matrix());
  }
  CoincidenceReport report;
  report.exhaustive = false;
  std::vector<ClassTally> tally;
  for (u64 l = 1; l < p; ++l) tally.push_back({l, 0, 0});
  for (u64 t = 0; t < opts.trials; ++t) {
    auto& c = tally[multiplier[t] - 1];
    ++c.pairs;
    c.violations += violated[t];
    ++report.pairs;
    report.violations += violated[t];
    if (violated[t] && !report.counterexample) {
      Rng rng(splitmix64(opts.seed ^ splitmix64(t)));
      const FieldElement lambda(1 + rng.below(p - 1), ell);
      const FrobeniusSample s = sample_frobenius(model, lambda, rng);
      report.counterexample = {s.x.matrix(), s.y.matrix()};
    }
  }
  for (const auto& c : tally)
    if (c.pairs) report.classes.push_back(c);
  return report;
}

}  // namespace

CoincidenceReport check_det_coincidence(const JointImageModel& model, const CoincidenceOptions& opts) {
  if (!model.equal_dimensions()) throw Error("coincidence experiments need equal dimensions");
  return opts.exhaustive ? exhaustive_coincidence(model, opts) : sampled_coincidence(model, opts);
}

namespace {

bool closed_under_product(const std::vector<Matrix>& elems) {
  std::unordered_set<u64> codes;
  for (const auto& m : elems) codes.insert(m.code());
  for (const auto& a : elems)
    for (const auto& b : elems)
      if (!codes.count((a * b).code())) return false;
  return true;
}

}  // namespace

KernelAudit projected_kernel_audit(const JointImageModel& model, u64 cap) {
  const SubgroupEnumeration sp = enumerate_sp(model.first(), cap);
  const Matrix id2 = Matrix::identity(model.second().dim(), model.second().modulus());
  KernelAudit audit{0, false, true, {}};
  for (const auto& x : sp.elements())
    if (model.contains(x, id2)) audit.elements.push_back(x);
  audit.order = audit.elements.size();
  const Matrix minus = Matrix::scalar(model.first().dim(), model.first().modulus(), model.first().modulus() - 1);
  bool has_identity = false;
  for (const auto& x : audit.elements) {
    audit.contains_minus_identity |= x == minus;
    has_identity |= x.is_identity();
    const auto l = multiplier_of(x);
    if (!l || l->residue() != 1) audit.is_sp_subgroup = false;
  }
  if (!has_identity) audit.is_sp_subgroup = false;
  if (audit.is_sp_subgroup) {
    // A multiplier-one subset of full order is Sp itself.
    audit.is_sp_subgroup = audit.order == sp.size() || (audit.order <= 2048 && closed_under_product(audit.elements));
  }
  return audit;
}

GoursatReport goursat_degrees(const JointImageModel& model, u64 cap) {
  const SubgroupEnumeration sp1 = enumerate_sp(model.first(), cap);
  const Matrix id1 = Matrix::identity(model.first().dim(), model.first().modulus());
  const Matrix id2 = Matrix::identity(model.second().dim(), model.second().modulus());
  u64 ker2 = 0;
  for (const auto& x : sp1.elements()) ker2 += model.contains(x, id2);
  u64 ker1 = 0;
  if (model.equal_dimensions()) {
    for (const auto& y : sp1.elements()) ker1 += model.contains(id1, y);
  } else {
    const SubgroupEnumeration sp2 = enumerate_sp(model.second(), cap);
    for (const auto& y : sp2.elements()) ker1 += model.contains(id1, y);
  }
  GoursatReport r{ker1, ker2, Dichotomy::Violated, std::nullopt};
  if (ker1 == 1 && ker2 == 1)
    r.dichotomy = Dichotomy::EqualFields;
  else if (ker1 == 2 && ker2 == 2)
    r.dichotomy = Dichotomy::IndexTwo;
  if (model.kernel_bound) r.within_kernel_bound = ker1 <= *model.kernel_bound && ker2 <= *model.kernel_bound;
  return r;
}

CongruenceCheck step3_congruence_experiment(const JointImageModel& model) {
  if (model.kind() != ModelKind::QuadraticTwistGraph) throw Error("the congruence experiment needs the twist model");
  const GroupSpec& spec = model.first();
  const Matrix id = Matrix::identity(spec.dim(), spec.modulus());
  const Matrix y = model.image(id, -1);
  CongruenceCheck c{};
  c.det_value = (id - y).det();
  c.expected = pow_mod(2, 2 * spec.g, spec.modulus());
  c.nonzero = c.det_value != 0;
  c.verified = c.nonzero && c.det_value == c.expected;
  return c;
}

}  // namespace isorad
