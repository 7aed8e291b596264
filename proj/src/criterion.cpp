#include "isorad/criterion.hpp"

#include <algorithm>

#include "isorad/kernels.hpp"

namespace isorad {

void CriterionConfig::validate() const {
  if (p_max < 5) throw Error("p_max must be at least 5");
  if (lambda_set.empty()) throw Error("the set of test primes is empty");
  for (PrimeModulus l : lambda_set)
    if (l.value() < 3) throw Error("test primes must be odd");
}

std::vector<u64> CriterionConfig::sorted_lambda() const {
  std::vector<u64> out(lambda_set.begin(), lambda_set.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::vector<u64> good_places(const std::vector<const CurveOverQ*>& curves, u64 p_max, const std::set<u64>& excluded,
                             std::vector<u64>* skipped) {
  std::vector<u64> out;
  if (p_max < 5) return out;
  for (PrimeModulus p : primes_in_range(5, p_max)) {
    bool good = !excluded.count(p.value());
    for (const auto* c : curves) good = good && reduce(*c, p).has_value();
    if (good)
      out.push_back(p.value());
    else if (skipped)
      skipped->push_back(p.value());
  }
  return out;
}

std::vector<u64> counts(const CurveOverQ& c, const std::vector<u64>& places, bool parallel) {
  return parallel ? kernels::count_over_primes_parallel(c, places) : kernels::count_over_primes_serial(c, places);
}

}  // namespace

CoincidenceMatrix coincidence_matrix(const CurveOverQ& first, const CurveOverQ& second, const CriterionConfig& cfg) {
  cfg.validate();
  CoincidenceMatrix t;
  t.places = good_places({&first, &second}, cfg.p_max, cfg.excluded_places, &t.skipped);
  t.ells = cfg.sorted_lambda();
  t.counts_first = counts(first, t.places, cfg.parallel);
  t.counts_second = counts(second, t.places, cfg.parallel);
  t.cells.resize(t.places.size() * t.ells.size());
  for (std::size_t i = 0; i < t.places.size(); ++i) {
    for (std::size_t j = 0; j < t.ells.size(); ++j) {
      const bool a = t.counts_first[i] % t.ells[j] == 0;
      const bool b = t.counts_second[i] % t.ells[j] == 0;
      t.cells[i * t.ells.size() + j] =
          a ? (b ? CellState::Both : CellState::OnlyFirst) : (b ? CellState::OnlySecond : CellState::Neither);
    }
  }
  return t;
}

Verdict verdict_from(const CoincidenceMatrix& t, const CriterionConfig& cfg) {
  Verdict v;
  v.p_max = cfg.p_max;
  v.lambda = t.ells;
  v.skipped = t.skipped;
  v.places_scanned = t.places.size();
  for (u64 l : t.ells) v.summary.push_back(TallyRow{l});
  for (std::size_t i = 0; i < t.places.size(); ++i) {
    for (std::size_t j = 0; j < t.ells.size(); ++j) {
      TallyRow& row = v.summary[j];
      switch (t.at(i, j)) {
        case CellState::Both: ++row.both; break;
        case CellState::Neither: ++row.neither; break;
        case CellState::OnlyFirst:
          ++row.only_first;
          v.all_witnesses.push_back({t.places[i], t.ells[j], true, false});
          break;
        case CellState::OnlySecond:
          ++row.only_second;
          v.all_witnesses.push_back({t.places[i], t.ells[j], false, true});
          break;
      }
    }
  }
  if (!v.all_witnesses.empty()) v.witness = v.all_witnesses.front();
  return v;
}

Verdict run_criterion(const CurveOverQ& first, const CurveOverQ& second, const CriterionConfig& cfg) {
  const CoincidenceMatrix t = coincidence_matrix(first, second, cfg);
  if (t.places.empty())
    throw EmptyScan("no place of good reduction for both curves in [5, " + std::to_string(cfg.p_max) + "]");
  return verdict_from(t, cfg);
}

std::vector<u64> splitting_places(const CurveOverQ& curve, PrimeModulus ell, u64 p_max, bool parallel) {
  if (ell.value() < 3) throw Error("l must be odd");
  std::vector<u64> places = good_places({&curve}, p_max, {}, nullptr);
  std::erase(places, ell.value());
  const auto n = counts(curve, places, parallel);
  // Full l-torsion forces l^2 | N and l | p - 1; only those places need the
  // point-by-point torsion computation.
  const u64 l = ell.value();
  std::vector<u64> candidates;
  for (std::size_t k = 0; k < places.size(); ++k)
    if (n[k] % (l * l) == 0 && places[k] % l == 1) candidates.push_back(places[k]);
  const auto ranks = parallel ? kernels::torsion_rank_over_primes_parallel(curve, candidates, ell)
                              : kernels::torsion_rank_over_primes_serial(curve, candidates, ell);
  std::vector<u64> out;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (ranks[k] == 2) out.push_back(candidates[k]);
  return out;
}

TwistExperimentReport twist_witness_experiment(const CurveOverQ& curve, i64 d, PrimeModulus ell, u64 p_max,
                                               bool parallel) {
  if (ell.value() < 3) throw Error("l must be odd");
  if (d == 1 || !is_squarefree(d)) throw Error("d must be squarefree and not a square");
  const CurveOverQ twisted = quadratic_twist(curve, d);
  TwistExperimentReport r{d, ell.value(), p_max, splitting_places(curve, ell, p_max, parallel), {}};
  std::vector<u64> chosen;
  for (u64 p : r.splitting)
    if (legendre_symbol(d, PrimeModulus(p)) == -1) chosen.push_back(p);
  const auto n = counts(curve, chosen, parallel);
  const auto nt = counts(twisted, chosen, parallel);
  const u64 four = 4 % ell.value();
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    r.selected.push_back({chosen[k], n[k], nt[k]});
    r.all_congruent = r.all_congruent && nt[k] % ell.value() == four;
    r.all_witnesses = r.all_witnesses && n[k] % ell.value() == 0 && nt[k] % ell.value() != 0;
  }
  return r;
}

}  // namespace isorad
