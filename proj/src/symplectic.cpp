#include "isorad/symplectic.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace isorad {

GroupSpec::GroupSpec(unsigned g_, PrimeModulus ell_) : g(g_), ell(ell_) {
  if (g == 0) throw Error("g must be at least 1");
  if (ell.value() == 2) throw Error("l = 2 is not supported");
  if (ell.value() > 0xffffffffULL) throw OverflowError("l must fit in 32 bits");
}

std::optional<FieldElement> multiplier_of(const Matrix& m) {
  if (m.dim() == 0 || m.dim() % 2 != 0) return std::nullopt;
  if (!is_prime(m.modulus())) return std::nullopt;
  const std::size_t g = m.dim() / 2;
  const Matrix j = standard_form(g, m.modulus());
  const Matrix form = m.transpose() * j * m;
  const u64 lambda = form(0, g);
  if (lambda == 0) return std::nullopt;
  if (!(form == j.scaled(lambda))) return std::nullopt;
  return FieldElement(lambda, PrimeModulus(m.modulus()));
}

namespace {

FieldElement checked_multiplier(const Matrix& m) {
  auto l = multiplier_of(m);
  if (!l) throw NotSymplectic("matrix is not in GSp");
  return *l;
}

}  // namespace

GspElement::GspElement(Matrix m) : m_(std::move(m)), lambda_(checked_multiplier(m_)) {}

GspElement GspElement::inverse() const {
  const Matrix j = standard_form(g(), m_.modulus());
  const Matrix j_inv = j.scaled(m_.modulus() - 1);
  const u64 s = inv_mod(lambda_.residue(), m_.modulus());
  return GspElement((j_inv * m_.transpose() * j).scaled(s));
}

bool det_multiplier_check(const GspElement& m) {
  return m.matrix().det() == m.multiplier().pow(m.g()).residue();
}

Matrix multiplier_adjuster(const GroupSpec& spec, u64 lambda) {
  Matrix d = Matrix::identity(spec.dim(), spec.modulus());
  for (std::size_t i = spec.g; i < spec.dim(); ++i) d.set(i, i, lambda);
  return d;
}

Matrix transvection(std::size_t g, u64 modulus, const std::vector<u64>& v, u64 c) {
  const std::size_t n = 2 * g;
  // (v^T J)_k = -v_{k+g} for k < g, v_{k-g} for k >= g.
  std::vector<u64> w(n);
  for (std::size_t k = 0; k < g; ++k) {
    w[k] = sub_mod(0, v[k + g] % modulus, modulus);
    w[k + g] = v[k] % modulus;
  }
  Matrix t = Matrix::identity(n, modulus);
  for (std::size_t i = 0; i < n; ++i) {
    const u64 cv = mul_mod(c % modulus, v[i] % modulus, modulus);
    for (std::size_t k = 0; k < n; ++k) t.set(i, k, add_mod(t(i, k), mul_mod(cv, w[k], modulus), modulus));
  }
  return t;
}

std::vector<Matrix> sp_generators(const GroupSpec& spec) {
  const std::size_t n = spec.dim();
  std::vector<Matrix> gens;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<u64> v(n, 0);
    v[i] = 1;
    gens.push_back(transvection(spec.g, spec.modulus(), v, 1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<u64> v(n, 0);
      v[i] = v[j] = 1;
      gens.push_back(transvection(spec.g, spec.modulus(), v, 1));
    }
  }
  return gens;
}

u64 sp_order(const GroupSpec& spec) {
  const u64 l = spec.modulus();
  u64 order = checked_pow(l, spec.g * spec.g);
  for (unsigned i = 1; i <= spec.g; ++i) order = checked_mul(order, checked_pow(l, 2 * i) - 1);
  return order;
}

bool cardinal_separation(unsigned g1, unsigned z1, unsigned g2, unsigned z2, PrimeModulus ell) {
  if ((z1 != 1 && z1 != 2) || (z2 != 1 && z2 != 2)) throw Error("central subgroup order must be 1 or 2");
  const u64 a = sp_order(GroupSpec(g1, ell));
  const u64 b = sp_order(GroupSpec(g2, ell));
  return a / z1 == b / z2;
}

bool cardinal_separation_holds(unsigned g_max, PrimeModulus ell) {
  for (unsigned g1 = 1; g1 <= g_max; ++g1)
    for (unsigned g2 = 1; g2 <= g_max; ++g2)
      for (unsigned z1 : {1u, 2u})
        for (unsigned z2 : {1u, 2u})
          if (cardinal_separation(g1, z1, g2, z2, ell) && (g1 != g2 || z1 != z2)) return false;
  return true;
}

SubgroupEnumeration::SubgroupEnumeration(GroupSpec spec, std::vector<Matrix> elements)
    : spec_(spec), elements_(std::move(elements)) {
  if (!Matrix::code_fits(spec_.dim(), spec_.modulus())) throw CapExceeded("matrix keys do not fit in 64 bits");
  index_.reserve(elements_.size() * 2);
  for (std::uint32_t i = 0; i < elements_.size(); ++i) {
    if (!index_.emplace(elements_[i].code(), i).second) throw Error("duplicate subgroup element");
  }
}

std::optional<std::uint32_t> SubgroupEnumeration::index_of(const Matrix& m) const {
  auto it = index_.find(m.code());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t SubgroupEnumeration::product(std::uint32_t a, std::uint32_t b) const {
  auto idx = index_of(elements_[a] * elements_[b]);
  if (!idx) throw Error("subgroup not closed under product");
  return *idx;
}

SubgroupEnumeration enumerate_sp(const GroupSpec& spec, u64 cap) {
  const u64 order = sp_order(spec);
  if (order > cap) throw CapExceeded("|Sp| = " + std::to_string(order) + " exceeds cap " + std::to_string(cap));
  if (!Matrix::code_fits(spec.dim(), spec.modulus())) throw CapExceeded("matrix keys do not fit in 64 bits");

  const auto gens = sp_generators(spec);
  std::vector<Matrix> elems{Matrix::identity(spec.dim(), spec.modulus())};
  std::unordered_map<u64, std::uint32_t> seen{{elems[0].code(), 0}};
  seen.reserve(order * 2);
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& s : gens) {
      Matrix next = elems[head] * s;
      if (seen.emplace(next.code(), static_cast<std::uint32_t>(elems.size())).second) elems.push_back(std::move(next));
    }
  }
  if (elems.size() != order) throw Error("transvection closure has the wrong order");
  return SubgroupEnumeration(spec, std::move(elems));
}

std::vector<std::vector<std::uint32_t>> conjugacy_classes(const SubgroupEnumeration& group) {
  const auto gens = sp_generators(group.spec());
  std::vector<Matrix> gens_inv;
  for (const auto& s : gens) gens_inv.push_back(s.inverse());

  const std::size_t n = group.size();
  std::vector<std::int32_t> class_of(n, -1);
  std::vector<std::vector<std::uint32_t>> classes;
  for (std::uint32_t start = 0; start < n; ++start) {
    if (class_of[start] >= 0) continue;
    const auto id = static_cast<std::int32_t>(classes.size());
    std::vector<std::uint32_t> orbit{start};
    class_of[start] = id;
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      const Matrix& x = group.elements()[orbit[head]];
      for (std::size_t k = 0; k < gens.size(); ++k) {
        auto idx = group.index_of(gens[k] * x * gens_inv[k]);
        if (!idx) throw Error("group not closed under conjugation");
        if (class_of[*idx] < 0) {
          class_of[*idx] = id;
          orbit.push_back(*idx);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    classes.push_back(std::move(orbit));
  }
  return classes;
}

namespace {

/// Subgroup generated incrementally by Dimino's coset method.
class SubgroupBuilder {
 public:
  explicit SubgroupBuilder(const SubgroupEnumeration& group)
      : group_(group), member_(group.size(), 0), elems_{0} {
    member_[0] = 1;
  }

  void add_generator(std::uint32_t c) {
    if (member_[c]) return;
    gens_.push_back(c);
    const std::vector<std::uint32_t> old = elems_;
    std::vector<std::uint32_t> reps{0};
    add_coset(old, c);
    reps.push_back(c);
    for (std::size_t i = 1; i < reps.size(); ++i) {
      for (std::uint32_t s : gens_) {
        if (elems_.size() == group_.size()) return;
        const std::uint32_t e = group_.product(reps[i], s);
        if (!member_[e]) {
          add_coset(old, e);
          reps.push_back(e);
        }
      }
    }
  }

  bool contains(std::uint32_t x) const { return member_[x] != 0; }
  std::size_t size() const { return elems_.size(); }
  const std::vector<std::uint32_t>& generators() const { return gens_; }

 private:
  void add_coset(const std::vector<std::uint32_t>& old, std::uint32_t rep) {
    for (std::uint32_t h : old) {
      const std::uint32_t e = group_.product(h, rep);
      if (!member_[e]) {
        member_[e] = 1;
        elems_.push_back(e);
      }
    }
  }

  const SubgroupEnumeration& group_;
  std::vector<char> member_;
  std::vector<std::uint32_t> elems_;
  std::vector<std::uint32_t> gens_;
};

struct NormalSubgroup {
  std::vector<bool> classes;
  std::vector<std::uint32_t> generators;
  u64 order;
};

NormalSubgroup close_classes(const SubgroupEnumeration& group,
                             const std::vector<std::vector<std::uint32_t>>& classes,
                             const std::vector<std::uint32_t>& generators) {
  SubgroupBuilder b(group);
  for (std::uint32_t x : generators) b.add_generator(x);
  NormalSubgroup out{std::vector<bool>(classes.size(), false), b.generators(), b.size()};
  for (std::size_t c = 0; c < classes.size(); ++c) out.classes[c] = b.contains(classes[c].front());
  return out;
}

}  // namespace

std::vector<u64> normal_subgroup_audit(const SubgroupEnumeration& group) {
  const auto classes = conjugacy_classes(group);

  // Normal closure of each class: the generated subgroup of a conjugation-
  // stable set is normal, and every normal subgroup is a join of these.
  std::vector<NormalSubgroup> found;
  std::set<std::vector<bool>> keys;
  auto record = [&](NormalSubgroup n) {
    if (keys.insert(n.classes).second) found.push_back(std::move(n));
  };
  for (const auto& cls : classes) {
    SubgroupBuilder b(group);
    for (std::uint32_t x : cls) {
      b.add_generator(x);
      if (b.size() == group.size()) break;
    }
    record(close_classes(group, classes, b.generators()));
  }

  for (std::size_t i = 0; i < found.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      std::vector<bool> uni(classes.size());
      for (std::size_t c = 0; c < classes.size(); ++c) uni[c] = found[i].classes[c] || found[j].classes[c];
      if (keys.count(uni)) continue;
      std::vector<std::uint32_t> gens = found[i].generators;
      gens.insert(gens.end(), found[j].generators.begin(), found[j].generators.end());
      record(close_classes(group, classes, gens));
    }
  }

  std::vector<u64> orders;
  for (const auto& n : found) orders.push_back(n.order);
  std::sort(orders.begin(), orders.end());
  return orders;
}

bool is_excluded_simplicity_case(const GroupSpec& spec) { return spec.g == 1 && spec.modulus() == 3; }

GspElement random_gsp_element(const GroupSpec& spec, const FieldElement& target, Rng& rng,
                              unsigned word_length) {
  if (target.modulus() != spec.ell) throw Error("multiplier lives in the wrong field");
  if (target.is_zero()) throw Error("multiplier must be nonzero");
  const std::size_t n = spec.dim();
  const std::size_t g = spec.g;
  const u64 p = spec.modulus();
  Matrix m = Matrix::identity(n, p);
  std::vector<u64> v(n), w(n);
  for (unsigned step = 0; step < word_length; ++step) {
    bool nonzero = false;
    while (!nonzero) {
      for (auto& x : v) {
        x = rng.below(p);
        nonzero |= x != 0;
      }
    }
    const u64 c = 1 + rng.below(p - 1);
    // M <- (I + c v v^T J) M, i.e. add c v (v^T J M).
    for (std::size_t k = 0; k < g; ++k) {
      w[k] = sub_mod(0, v[k + g], p);
      w[k + g] = v[k];
    }
    std::vector<u64> row(n, 0);
    for (std::size_t col = 0; col < n; ++col) {
      u64 s = 0;
      for (std::size_t k = 0; k < n; ++k) s = add_mod(s, mul_mod(w[k], m(k, col), p), p);
      row[col] = mul_mod(s, c, p);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] == 0) continue;
      for (std::size_t col = 0; col < n; ++col) m.set(i, col, add_mod(m(i, col), mul_mod(v[i], row[col], p), p));
    }
  }
  return GspElement(m * multiplier_adjuster(spec, target.residue()));
}

GspElement random_gsp_element(const GroupSpec& spec, const FieldElement& target, u64 seed,
                              unsigned word_length) {
  Rng rng(seed);
  return random_gsp_element(spec, target, rng, word_length);
}

}  // namespace isorad
