#pragma once

// Finite-window divisibility criterion: two curves are scanned over good
// places p <= p_max and test primes l in a finite set. A place where l
// divides exactly one of the two point counts rules out an isogeny. The
// absence of such a place is reported as consistency up to the scanned
// bounds and nothing more.

#include <optional>
#include <set>
#include <vector>

#include "isorad/curves.hpp"

namespace isorad {

/// No place of good reduction for both curves lies in [5, p_max].
class EmptyScan : public Error {
 public:
  using Error::Error;
};

struct CriterionConfig {
  u64 p_max = 10'000;
  std::vector<PrimeModulus> lambda_set;
  std::set<u64> excluded_places;
  bool parallel = true;

  /// Throws Error unless p_max >= 5 and lambda_set is a nonempty set of odd primes.
  void validate() const;
  /// lambda_set sorted ascending and deduplicated.
  std::vector<u64> sorted_lambda() const;
};

struct WitnessRecord {
  u64 p;
  u64 ell;
  bool divides_first;
  bool divides_second;

  /// 1 when l divides the first count, 2 when it divides the second.
  int side() const noexcept { return divides_first ? 1 : 2; }
  friend bool operator==(const WitnessRecord&, const WitnessRecord&) = default;
};

enum class CellState : std::uint8_t { Neither, OnlyFirst, OnlySecond, Both };

/// Divisibility state of every (p, l) cell, p ascending by row.
struct CoincidenceMatrix {
  std::vector<u64> places;
  std::vector<u64> ells;
  std::vector<u64> counts_first;
  std::vector<u64> counts_second;
  std::vector<CellState> cells;
  /// Places in range that were skipped for bad reduction (or by configuration).
  std::vector<u64> skipped;

  CellState at(std::size_t place, std::size_t ell) const { return cells[place * ells.size() + ell]; }
};

struct TallyRow {
  u64 ell;
  u64 both = 0;
  u64 neither = 0;
  u64 only_first = 0;
  u64 only_second = 0;
};

struct Verdict {
  std::optional<WitnessRecord> witness;
  u64 p_max;
  std::vector<u64> lambda;
  std::vector<TallyRow> summary;
  std::vector<u64> skipped;
  u64 places_scanned = 0;
  /// Every xor cell in scan order; witness is its first entry.
  std::vector<WitnessRecord> all_witnesses;

  bool is_witness() const noexcept { return witness.has_value(); }
};

CoincidenceMatrix coincidence_matrix(const CurveOverQ& first, const CurveOverQ& second, const CriterionConfig& cfg);

/// Reads the verdict off a complete table; p-major, then l ascending.
Verdict verdict_from(const CoincidenceMatrix& table, const CriterionConfig& cfg);

/// Throws EmptyScan when no common good place exists below p_max.
Verdict run_criterion(const CurveOverQ& first, const CurveOverQ& second, const CriterionConfig& cfg);

/// Good p <= p_max (p != l) with E(F_p)[l] of rank 2.
std::vector<u64> splitting_places(const CurveOverQ& curve, PrimeModulus ell, u64 p_max, bool parallel = true);

struct TwistPlace {
  u64 p;
  u64 count;        ///< #E(F_p)
  u64 twist_count;  ///< #E^d(F_p)
};

struct TwistExperimentReport {
  i64 d;
  u64 ell;
  u64 p_max;
  std::vector<u64> splitting;
  /// Splitting places with (d / p) = -1.
  std::vector<TwistPlace> selected;
  /// Every selected place has #E^d(F_p) = 4 mod l.
  bool all_congruent = true;
  /// Every selected place is a witness against (E, E^d).
  bool all_witnesses = true;

  double survival_fraction() const {
    return splitting.empty() ? 0.0 : static_cast<double>(selected.size()) / splitting.size();
  }
};

/// Requires l odd and d squarefree and not 1.
TwistExperimentReport twist_witness_experiment(const CurveOverQ& curve, i64 d, PrimeModulus ell, u64 p_max,
                                               bool parallel = true);

}  // namespace isorad
