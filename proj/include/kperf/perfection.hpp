#pragma once

#include "kperf/limits.hpp"

#include <map>
#include <string>
#include <vector>

namespace kperf {

// F_p[t]/(t^m) with exact characteristic-p arithmetic. Elements are dense
// coefficient vectors of length m with entries in [0, p).
class TruncatedPolyAlgebra {
 public:
  using Elem = std::vector<int32_t>;

  TruncatedPolyAlgebra(long p, long m);

  long p() const { return p_; }
  long m() const { return m_; }
  Int element_count() const { return pow_int(p_, static_cast<unsigned long>(m_)); }
  Int unit_count() const {
    return Int(p_ - 1) * pow_int(p_, static_cast<unsigned long>(m_ - 1));
  }

  Elem zero() const { return Elem(static_cast<size_t>(m_), 0); }
  Elem one() const;
  Elem t_power(long k) const;  // t^k, zero when k >= m
  Elem constant(long c) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(Elem a, Int e) const;
  // x -> x^p; in characteristic p this is coefficient transport t^i -> t^{pi}
  Elem frobenius(const Elem& a) const;

  bool is_zero(const Elem& a) const;
  bool is_unit(const Elem& a) const { return a[0] != 0; }
  bool is_constant(const Elem& a) const;

  std::vector<Elem> all_elements() const;
  std::vector<Elem> all_units() const;

  std::string to_string(const Elem& a) const;

 private:
  long p_, m_;
};

// The unit group (F_p[t]/t^m)^* presented as an abstract abelian group by
// brute force: greedy generators, a breadth-first scan assigning exponent
// coordinates to every unit, and collision relations reduced incrementally.
// unit_log is a bijection between units and group elements.
struct UnitsGroup {
  TruncatedPolyAlgebra algebra;
  AbelianGroup group;
  std::vector<TruncatedPolyAlgebra::Elem> generators;
  std::map<TruncatedPolyAlgebra::Elem, IntVec> unit_log;  // unit -> Z^r coords
  GroupHom frobenius_action;

  GroupElement log(const TruncatedPolyAlgebra::Elem& u) const;
  TruncatedPolyAlgebra::Elem exp(const IntVec& coords) const;
};

// p prime, m >= 2, (p-1) p^{m-1} bounded (the algebra stays enumerable).
UnitsGroup units_group(long p, long m, StepBudget budget = StepBudget());

// The units model of K_1 for R = F_p[t]/(t^m): the brute-force colimit of
// units along Frobenius, the localization U(R)[1/p], and U(R_perf) = F_p^*
// must share one isomorphism class. The perfection side is not assumed: the
// report certifies at element level that Frobenius iterates collapse R onto
// its constants.
struct K1Report {
  long p = 0, m = 0;
  std::vector<Int> colim_factors;
  std::vector<Int> localized_factors;
  std::vector<Int> perf_units_factors;
  bool perfection_is_constants = false;
  bool colim_order_coprime_p = false;  // unique p-divisibility of the colimit
  bool agree = false;
  std::string detail;
};

K1Report verify_main_theorem_k1(long p, long m, StepBudget budget = StepBudget());

// When Frobenius is not injective, K_1(R) = R^* has p-torsion: a nilpotent r
// with r^p = 0 makes 1 + r a unit of exact order p.
struct PTorsionReport {
  long p = 0, m = 0;
  bool ok = false;
  TruncatedPolyAlgebra::Elem witness_nilpotent;
  std::string witness_unit;
  Int unit_order;
  std::string detail;
};

PTorsionReport verify_ptorsion_remark(long p, long m);

// User-supplied K-group data: an abstract group with the action induced by
// Frobenius, labelled by degree. Negative-K values are inputs here, never
// computed.
struct KGroupDatum {
  std::string label;
  AbelianGroup group;
  GroupHom frobenius;
  long degree = 0;
  std::string source;
};

// K_0(R_perf) = H_0(R) + K~_0(R)[1/p], checked through the lemma on the
// Frobenius action of the supplied K~_0 datum.
struct K0SplitReport {
  Index h0_rank = 0;
  Int p;
  LemEllReport lemell;
  bool computed = false;  // false when the lemma fails on an infinite group
  Index predicted_free_rank = 0;          // count of Z[1/p] summands past Z^c
  std::vector<Int> predicted_torsion;
  std::string predicted;  // e.g. "Z^2 + Z[1/p] + Z/3"
  std::string detail;
};

K0SplitReport verify_k0_splitting(Index h0_rank, const KGroupDatum& datum, const Int& p,
                                  StepBudget budget = StepBudget());

// For degree -i < 0 the scaled morphism p^i K_{-i}(Fr) must satisfy the lemma
// conditions, making K_{-i}(R)[1/p] -> K_{-i}(R_perf)[1/p] an isomorphism.
struct NegKReport {
  std::string label;
  long degree = 0;
  Int p;
  IntMat scaled_matrix;  // p^i * frobenius
  LemEllReport lemell;
  bool ok = false;
  std::string localization;
  std::string detail;
};

NegKReport verify_negative_k_scaling(const KGroupDatum& datum, const Int& p,
                                     StepBudget budget = StepBudget());

}  // namespace kperf
