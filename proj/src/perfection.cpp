#include "kperf/perfection.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace kperf {

TruncatedPolyAlgebra::TruncatedPolyAlgebra(long p, long m) : p_(p), m_(m) {
  if (!is_prime(Int(p))) throw DomainError("p must be prime");
  if (m < 1) throw DomainError("truncation order must be at least 1");
}

TruncatedPolyAlgebra::Elem TruncatedPolyAlgebra::one() const {
  Elem e = zero();
  e[0] = 1;
  return e;
}

TruncatedPolyAlgebra::Elem TruncatedPolyAlgebra::t_power(long k) const {
  Elem e = zero();
  if (k >= 0 && k < m_) e[static_cast<size_t>(k)] = 1;
  return e;
}

TruncatedPolyAlgebra::Elem TruncatedPolyAlgebra::constant(long c) const {
  Elem e = zero();
  e[0] = static_cast<int32_t>(((c % p_) + p_) % p_);
  return e;
}

TruncatedPolyAlgebra::Elem TruncatedPolyAlgebra::add(const Elem& a, const Elem& b) const {
  Elem r = zero();
  for (size_t i = 0; i < r.size(); ++i) r[i] = static_cast<int32_t>((a[i] + b[i]) % p_);
  return r;
}

TruncatedPolyAlgebra::Elem TruncatedPolyAlgebra::mul(const Elem& a, const Elem& b) const {
  Elem r = zero();
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; i + j < b.size(); ++j) {
      if (b[j] == 0) continue;
      r[i + j] = static_cast<int32_t>((r[i + j] + static_cast<long>(a[i]) * b[j]) % p_);
    }
  }
  return r;
}

TruncatedPolyAlgebra::Elem TruncatedPolyAlgebra::pow(Elem a, Int e) const {
  if (e < 0) throw DomainError("negative exponent");
  Elem acc = one();
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, a);
    a = mul(a, a);
    e >>= 1;
  }
  return acc;
}

TruncatedPolyAlgebra::Elem TruncatedPolyAlgebra::frobenius(const Elem& a) const {
  // (sum a_i t^i)^p = sum a_i^p t^{pi} = sum a_i t^{pi} over F_p
  Elem r = zero();
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    size_t k = i * static_cast<size_t>(p_);
    if (k < r.size()) r[k] = a[i];
  }
  return r;
}

bool TruncatedPolyAlgebra::is_zero(const Elem& a) const {
  return std::all_of(a.begin(), a.end(), [](int32_t c) { return c == 0; });
}

bool TruncatedPolyAlgebra::is_constant(const Elem& a) const {
  for (size_t i = 1; i < a.size(); ++i)
    if (a[i] != 0) return false;
  return true;
}

std::vector<TruncatedPolyAlgebra::Elem> TruncatedPolyAlgebra::all_elements() const {
  std::vector<Elem> out;
  Elem cur = zero();
  for (;;) {
    out.push_back(cur);
    size_t i = 0;
    while (i < cur.size()) {
      if (++cur[i] < p_) break;
      cur[i] = 0;
      ++i;
    }
    if (i == cur.size()) break;
  }
  return out;
}

std::vector<TruncatedPolyAlgebra::Elem> TruncatedPolyAlgebra::all_units() const {
  std::vector<Elem> out;
  for (auto& e : all_elements())
    if (is_unit(e)) out.push_back(e);
  return out;
}

std::string TruncatedPolyAlgebra::to_string(const Elem& a) const {
  std::string s;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    std::string term;
    if (i == 0) term = std::to_string(a[i]);
    else {
      if (a[i] != 1) term = std::to_string(a[i]) + "*";
      term += i == 1 ? "t" : "t^" + std::to_string(i);
    }
    if (!s.empty()) s += "+";
    s += term;
  }
  return s.empty() ? "0" : s;
}

namespace {

using Elem = TruncatedPolyAlgebra::Elem;

Int element_order(const TruncatedPolyAlgebra& alg, const Elem& u, const std::vector<Int>& primes,
                  const Int& group_order) {
  Int ord = group_order;
  for (const Int& q : primes) {
    while (ord % q == 0 && alg.pow(u, ord / q) == alg.one()) ord /= q;
  }
  return ord;
}

std::vector<Int> prime_factors(Int n) {
  std::vector<Int> out;
  for (Int q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Incrementally reduced integer row basis for the relation lattice; keeps
// the collision relations from the breadth-first scan from piling up.
struct RelationBasis {
  std::vector<IntVec> rows;  // one row per leading column

  void insert(IntVec v) {
    for (;;) {
      Index vp = leading(v);
      if (vp < 0) return;
      IntVec* pivot_row = nullptr;
      for (auto& row : rows)
        if (leading(row) == vp) {
          pivot_row = &row;
          break;
        }
      if (!pivot_row) {
        if (v(vp) < 0) v = -v;
        rows.push_back(std::move(v));
        return;
      }
      // euclidean combination: afterwards the basis row holds the gcd at vp
      // and v vanishes there, moving its leading column strictly right
      while (v(vp) != 0) {
        Int q = (*pivot_row)(vp) / v(vp);
        *pivot_row -= v * q;
        std::swap(*pivot_row, v);
      }
      if ((*pivot_row)(vp) < 0) *pivot_row = -*pivot_row;
    }
  }

  static Index leading(const IntVec& v) {
    for (Index i = 0; i < v.size(); ++i)
      if (v(i) != 0) return i;
    return -1;
  }

  IntMat matrix(Index cols) const {
    IntMat m(static_cast<Index>(rows.size()), cols);
    for (Index i = 0; i < m.rows(); ++i) m.row(i) = rows[static_cast<size_t>(i)].transpose();
    return m;
  }
};

}  // namespace

namespace {

// Brute-force presentation of a finite multiplicative subgroup given by an
// explicit element list closed under the algebra product: greedy generators
// of maximal order, breadth-first exponent coordinates, collision relations.
struct PresentedMultGroup {
  AbelianGroup group;
  std::vector<Elem> gens;
  std::map<Elem, IntVec> coords;
};

PresentedMultGroup present_mult_group(const TruncatedPolyAlgebra& alg,
                                      const std::vector<Elem>& elements, StepBudget& budget) {
  const Int n = static_cast<long>(elements.size());
  std::vector<Int> primes = prime_factors(n);
  std::vector<std::pair<Int, Elem>> by_order;
  by_order.reserve(elements.size());
  for (const auto& u : elements) {
    budget.spend();
    by_order.emplace_back(element_order(alg, u, primes, n), u);
  }
  std::stable_sort(by_order.begin(), by_order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::set<Elem> covered{alg.one()};
  std::vector<Elem> gens;
  for (const auto& [ord, u] : by_order) {
    if (static_cast<Int>(covered.size()) == n) break;
    if (covered.count(u)) continue;
    gens.push_back(u);
    std::set<Elem> bigger;
    for (const auto& c : covered) {
      Elem acc = c;
      for (Int k = 0; k < ord; ++k) {
        budget.spend();
        bigger.insert(acc);
        acc = alg.mul(acc, u);
      }
    }
    covered = std::move(bigger);
  }
  if (static_cast<Int>(covered.size()) != n)
    throw Error("internal: generator search did not cover the subgroup");

  const Index r = static_cast<Index>(gens.size());
  std::map<Elem, IntVec> coords;
  coords[alg.one()] = IntVec::Zero(r);
  std::vector<Elem> queue{alg.one()};
  RelationBasis rels;
  for (size_t head = 0; head < queue.size(); ++head) {
    Elem x = queue[head];
    IntVec cx = coords[x];
    for (Index i = 0; i < r; ++i) {
      budget.spend();
      Elem y = alg.mul(x, gens[static_cast<size_t>(i)]);
      IntVec cy = cx;
      cy(i) += 1;
      auto it = coords.find(y);
      if (it == coords.end()) {
        coords[y] = cy;
        queue.push_back(y);
      } else {
        IntVec rel = cy - it->second;
        if (!rel.isZero(0)) rels.insert(std::move(rel));
      }
    }
  }
  if (static_cast<Int>(coords.size()) != n)
    throw Error("internal: breadth-first scan missed subgroup elements");
  AbelianGroup group = AbelianGroup::from_relations(r, rels.matrix(r));
  if (group.free_rank() != 0 || group.torsion_order() != n)
    throw Error("internal: presented subgroup has the wrong order");
  return PresentedMultGroup{std::move(group), std::move(gens), std::move(coords)};
}

}  // namespace

GroupElement UnitsGroup::log(const Elem& u) const {
  auto it = unit_log.find(u);
  if (it == unit_log.end()) throw DomainError("not a unit of this algebra");
  return group.element(it->second);
}

Elem UnitsGroup::exp(const IntVec& coords) const {
  if (coords.size() != static_cast<Index>(generators.size()))
    throw DomainError("exponent vector has wrong length");
  Elem acc = algebra.one();
  Int n = algebra.unit_count();
  for (Index i = 0; i < coords.size(); ++i) {
    Int e = mod_floor(coords(i), n);  // generator orders divide |U|
    acc = algebra.mul(acc, algebra.pow(generators[static_cast<size_t>(i)], e));
  }
  return acc;
}

UnitsGroup units_group(long p, long m, StepBudget budget) {
  TruncatedPolyAlgebra alg(p, m);
  if (m < 2) throw DomainError("units model needs truncation order at least 2");
  if (alg.unit_count() > 1'000'000) throw DomainError("unit group exceeds the enumeration bound");

  PresentedMultGroup pres = present_mult_group(alg, alg.all_units(), budget);

  // Frobenius on coordinates: generator i maps to the scanned coordinates of
  // its p-th power
  const Index r = static_cast<Index>(pres.gens.size());
  IntMat fr(r, r);
  for (Index i = 0; i < r; ++i)
    fr.col(i) = pres.coords.at(alg.frobenius(pres.gens[static_cast<size_t>(i)]));
  GroupHom fr_hom(pres.group, pres.group, std::move(fr));
  fr_hom.require_well_defined();

  return UnitsGroup{alg, pres.group, std::move(pres.gens), std::move(pres.coords),
                    std::move(fr_hom)};
}

K1Report verify_main_theorem_k1(long p, long m, StepBudget budget) {
  K1Report rep;
  rep.p = p;
  rep.m = m;
  UnitsGroup u = units_group(p, m, budget);

  auto colim = stable_image(u.frobenius_action, budget);
  rep.colim_factors = colim.group.torsion_factors();
  rep.localized_factors = localize(u.group, p).torsion_factors();

  // element-level collapse of R onto constants under Frobenius iterates
  {
    std::set<Elem> cur;
    for (auto& e : u.algebra.all_elements()) cur.insert(e);
    for (;;) {
      budget.spend(cur.size());
      std::set<Elem> next;
      for (const auto& e : cur) next.insert(u.algebra.frobenius(e));
      if (next == cur) break;
      cur = std::move(next);
    }
    rep.perfection_is_constants =
        std::all_of(cur.begin(), cur.end(),
                    [&](const Elem& e) { return u.algebra.is_constant(e); }) &&
        static_cast<long>(cur.size()) == p;
  }

  // U(R_perf) = F_p^*: the constants subgroup, presented independently of the
  // colimit route
  {
    std::vector<Elem> constants;
    for (long c = 1; c < p; ++c) constants.push_back(u.algebra.constant(c));
    PresentedMultGroup fp = present_mult_group(u.algebra, constants, budget);
    rep.perf_units_factors = fp.group.torsion_factors();
  }

  Int colim_order = 1;
  for (const Int& f : rep.colim_factors) colim_order *= f;
  rep.colim_order_coprime_p = gcd_int(colim_order, p) == 1;

  rep.agree = rep.colim_factors == rep.localized_factors &&
              rep.colim_factors == rep.perf_units_factors && rep.perfection_is_constants;
  auto fmt = [](const std::vector<Int>& f) {
    if (f.empty()) return std::string("0");
    std::string s;
    for (const Int& d : f) {
      if (!s.empty()) s += " + ";
      s += "Z/" + d.get_str();
    }
    return s;
  };
  rep.detail = "units model: K_1(R) = R^* for these local rings; colim U(R) = " +
               fmt(rep.colim_factors) + "; U(R)[1/p] = " + fmt(rep.localized_factors) +
               "; U(R_perf) = F_p^* = " + fmt(rep.perf_units_factors);
  return rep;
}

PTorsionReport verify_ptorsion_remark(long p, long m) {
  PTorsionReport rep;
  rep.p = p;
  rep.m = m;
  if (m < 2) throw DomainError("Frobenius is injective for m < 2; no p-torsion to exhibit");
  TruncatedPolyAlgebra alg(p, m);
  long j = (m + p - 1) / p;  // smallest j with j*p >= m, and j < m since m >= 2
  Elem r = alg.t_power(j);
  rep.witness_nilpotent = r;
  Elem unit = alg.add(alg.one(), r);
  rep.witness_unit = alg.to_string(unit);
  bool r_nonzero = !alg.is_zero(r);
  bool rp_zero = alg.is_zero(alg.pow(r, p));
  // order of 1 + r divides p, and 1 + r != 1; compute it honestly
  Int ord = 1;
  Elem acc = unit;
  while (acc != alg.one() && ord <= p) {
    acc = alg.mul(acc, unit);
    ++ord;
  }
  rep.unit_order = ord;
  rep.ok = r_nonzero && rp_zero && ord == p;
  rep.detail = rep.ok ? "1 + " + alg.to_string(r) + " is a unit of exact order " +
                            std::to_string(p)
                      : "no unit of exact order p found from the nilpotent witness";
  return rep;
}

K0SplitReport verify_k0_splitting(Index h0_rank, const KGroupDatum& datum, const Int& p,
                                  StepBudget budget) {
  if (datum.degree != 0) throw DomainError("K0 splitting needs a degree-0 datum");
  if (h0_rank < 1) throw DomainError("H0 rank must be positive");
  K0SplitReport rep;
  rep.h0_rank = h0_rank;
  rep.p = p;
  rep.lemell = lemell_check(datum.frobenius, p, budget);

  LocalizedGroup loc = localize(datum.group, p);
  auto fmt = [&](Index zc, Index zl, const std::vector<Int>& tors) {
    std::string s = "Z";
    if (zc > 1) s += "^" + std::to_string(zc);
    if (zl > 0) {
      s += " + Z[1/" + p.get_str() + "]";
      if (zl > 1) s += "^" + std::to_string(zl);
    }
    for (const Int& d : tors) s += " + Z/" + d.get_str();
    return s;
  };

  if (rep.lemell.overall) {
    // colim = localization under the lemma
    rep.computed = true;
    rep.predicted_free_rank = loc.free_rank();
    rep.predicted_torsion = loc.torsion_factors();
    rep.predicted = fmt(h0_rank, loc.free_rank(), loc.torsion_factors());
    rep.detail = "K0(R_perf) = Z^" + std::to_string(h0_rank) + " + K~0(R)[1/p] = " + rep.predicted;
  } else if (datum.group.is_finite()) {
    auto colim = stable_image(datum.frobenius, budget);
    rep.computed = true;
    rep.predicted_free_rank = 0;
    rep.predicted_torsion = colim.group.torsion_factors();
    rep.predicted = fmt(h0_rank, 0, colim.group.torsion_factors());
    rep.detail = "lemma conditions fail; colimit computed by brute force as " + rep.predicted;
  } else {
    rep.computed = false;
    rep.detail = "lemma conditions fail on an infinite group; colimit not determined";
  }
  return rep;
}

NegKReport verify_negative_k_scaling(const KGroupDatum& datum, const Int& p, StepBudget budget) {
  if (datum.degree >= 0)
    throw DomainError("negative-K scaling needs a datum of negative degree");
  NegKReport rep;
  rep.label = datum.label;
  rep.degree = datum.degree;
  rep.p = p;
  unsigned long i = static_cast<unsigned long>(-datum.degree);
  rep.scaled_matrix = datum.frobenius.matrix() * pow_int(p, i);
  GroupHom scaled(datum.group, datum.group, rep.scaled_matrix);
  rep.lemell = lemell_check(scaled, p, budget);
  rep.ok = rep.lemell.overall;
  rep.localization = localize(datum.group, p).structure_string();
  rep.detail = rep.ok ? "p^i K_{-i}(Fr) satisfies the lemma; K_{-i}(R)[1/p] = " +
                            rep.localization + " = K_{-i}(R_perf)[1/p]"
                      : "scaled Frobenius fails the lemma conditions";
  return rep;
}

}  // namespace kperf
