#pragma once

// Matrix-group models of the joint mod-l image of a pair of abelian
// varieties. A place is represented only by its Frobenius pair (x, y); the
// multiplier of both is the residue of the place's characteristic mod l.

#include <optional>
#include <string>
#include <vector>

#include "isorad/symplectic.hpp"

namespace isorad {

enum class ModelKind { GraphOfConjugation, QuadraticTwistGraph, FullFiberedProduct };

/// How the twist character takes its values on Frobenius elements.
/// Uniform draws it independently of x, standing in for linear disjointness
/// of the quadratic field and the torsion field.
enum class EpsilonLaw { AlwaysPlus, Uniform, AlwaysMinus };

std::string to_string(ModelKind kind);

/// A subgroup of GSp x GSp with matched multipliers.
class JointImageModel {
 public:
  /// Pairs (x, u^-1 x u).
  static JointImageModel graph(const GspElement& u);
  /// Pairs (x, e u^-1 x u) with e = +-1.
  static JointImageModel twist(const GspElement& u, EpsilonLaw law = EpsilonLaw::Uniform);
  /// All (x, y) with equal multipliers; the two sides may differ in g.
  static JointImageModel product(const GroupSpec& first, const GroupSpec& second);
  static JointImageModel product(const GroupSpec& spec) { return product(spec, spec); }

  ModelKind kind() const noexcept { return kind_; }
  const GroupSpec& first() const noexcept { return first_; }
  const GroupSpec& second() const noexcept { return second_; }
  const GspElement& conjugator() const;
  EpsilonLaw epsilon_law() const noexcept { return law_; }
  bool equal_dimensions() const noexcept { return first_.g == second_.g; }

  /// Whether the generated subgroup contains the sign-flipped graph.
  bool has_sign_flip() const noexcept { return kind_ == ModelKind::QuadraticTwistGraph && law_ != EpsilonLaw::AlwaysPlus; }

  /// e u^-1 x u, for the graph and twist variants.
  Matrix image(const Matrix& x, int epsilon = 1) const;
  /// Membership of (x, y) in the subgroup generated by the model's pairs.
  bool contains(const Matrix& x, const Matrix& y) const;

  /// Bound c on the kernel orders; carried through reports, never assumed.
  std::optional<u64> kernel_bound;

 private:
  JointImageModel(ModelKind kind, GroupSpec first, GroupSpec second, std::optional<GspElement> u, EpsilonLaw law);

  ModelKind kind_;
  GroupSpec first_;
  GroupSpec second_;
  std::optional<GspElement> u_;
  std::optional<Matrix> u_inv_;
  EpsilonLaw law_;
};

struct FrobeniusSample {
  GspElement x;
  GspElement y;
  FieldElement lambda;
  int epsilon;
};

/// One Frobenius pair with multiplier `p_residue`.
FrobeniusSample sample_frobenius(const JointImageModel& model, const FieldElement& p_residue, Rng& rng,
                                 unsigned word_length = kDefaultWordLength);
FrobeniusSample sample_frobenius(const JointImageModel& model, const FieldElement& p_residue, u64 seed,
                                 unsigned word_length = kDefaultWordLength);

/// det(M - I) == 0.
bool has_eigenvalue_one(const Matrix& m);

inline constexpr u64 kDefaultPairCap = 10'000'000;
inline constexpr u64 kDefaultTrials = 100'000;

struct CoincidenceOptions {
  bool exhaustive = true;
  u64 trials = kDefaultTrials;
  u64 seed = 0;
  u64 enumeration_cap = kDefaultEnumerationCap;
  /// Maximum number of pairs per multiplier class in exhaustive mode.
  u64 pair_cap = kDefaultPairCap;
  bool parallel = true;
};

/// Per multiplier class: pairs checked and pairs violating the biconditional.
struct ClassTally {
  u64 multiplier;
  u64 pairs;
  u64 violations;
};

struct CoincidenceReport {
  bool exhaustive;
  u64 pairs = 0;
  u64 violations = 0;
  std::vector<ClassTally> classes;
  /// First violating pair in scan order (multiplier class, then x, then y).
  std::optional<std::pair<Matrix, Matrix>> counterexample;

  bool holds() const noexcept { return violations == 0; }
  double rate() const noexcept { return pairs ? 1.0 - static_cast<double>(violations) / pairs : 1.0; }
};

/// Checks det(x - I) = 0 <=> det(y - I) = 0 over the model. Throws
/// CapExceeded in exhaustive mode when a class exceeds the caps.
CoincidenceReport check_det_coincidence(const JointImageModel& model, const CoincidenceOptions& opts = {});

/// True when the default policy (|Sp|^2 per class within the pair cap) picks exhaustive mode.
bool exhaustive_by_default(const GroupSpec& spec, u64 pair_cap = kDefaultPairCap);

struct KernelAudit {
  u64 order;
  bool contains_minus_identity;
  bool is_sp_subgroup;
  std::vector<Matrix> elements;
};

/// pi_1(ker pi_2) = { x : (x, I) in G }, computed by scanning Sp on the first side.
KernelAudit projected_kernel_audit(const JointImageModel& model, u64 cap = kDefaultEnumerationCap);

enum class Dichotomy { EqualFields, IndexTwo, Violated };
std::string to_string(Dichotomy d);

struct GoursatReport {
  u64 ker_pi1_order;
  u64 ker_pi2_order;
  Dichotomy dichotomy;
  /// Set when the model carries a kernel bound c: both kernels have order <= c.
  std::optional<bool> within_kernel_bound;
};

/// |ker pi_1| = #{y : (I, y) in G} and |ker pi_2| = #{x : (x, I) in G}.
GoursatReport goursat_degrees(const JointImageModel& model, u64 cap = kDefaultEnumerationCap);

struct CongruenceCheck {
  u64 det_value;  ///< det(I - y) mod l at x = I, e = -1
  u64 expected;   ///< 2^{2g} mod l
  bool nonzero;
  bool verified;
};

/// At a place where x = I and e = -1, det(I - y) must be 2^{2g} mod l, which
/// is nonzero for odd l.
CongruenceCheck step3_congruence_experiment(const JointImageModel& model);

}  // namespace isorad
