#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Eigen glue for exact arbitrary-precision integers. All linear algebra in
// this project runs on Eigen dense types with mpz_class scalars; there is no
// floating point anywhere in the core.
namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpq_class;
  using Nested = mpz_class;
  using Literal = long;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 30,
    MulCost = 50
  };
};

// Allow mixing small integer literals into mpz expressions (A * 2 etc.).
#define KPERF_MPZ_MIXED_TRAITS(T)                                         \
  template <typename BinaryOp>                                            \
  struct ScalarBinaryOpTraits<mpz_class, T, BinaryOp> {                   \
    typedef mpz_class ReturnType;                                         \
  };                                                                      \
  template <typename BinaryOp>                                            \
  struct ScalarBinaryOpTraits<T, mpz_class, BinaryOp> {                   \
    typedef mpz_class ReturnType;                                         \
  };
KPERF_MPZ_MIXED_TRAITS(int)
KPERF_MPZ_MIXED_TRAITS(long)
KPERF_MPZ_MIXED_TRAITS(long long)
#undef KPERF_MPZ_MIXED_TRAITS

}  // namespace Eigen

namespace kperf {

using Int = mpz_class;
using Index = Eigen::Index;
using IntMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (JSON schema, table axioms, ...).
struct LoadError : Error {
  using Error::Error;
};

// Violated operation precondition (dimension mismatch, wrong parent, ...).
struct DomainError : Error {
  using Error::Error;
};

// A long-running enumeration ran out of its step budget.
struct BudgetError : Error {
  using Error::Error;
};

// Step budget for enumeration loops. Copy one per computation; never shared.
class StepBudget {
 public:
  explicit StepBudget(std::uint64_t steps = 50'000'000) : left_(steps) {}
  void spend(std::uint64_t n = 1) {
    if (n > left_) throw BudgetError("step budget exhausted");
    left_ -= n;
  }
  std::uint64_t remaining() const { return left_; }

 private:
  std::uint64_t left_;
};

inline Int abs_int(const Int& a) { return a >= 0 ? a : Int(-a); }

inline Int gcd_int(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm_int(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// Representative of a mod m in [0, m), m > 0.
inline Int mod_floor(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Inverse of a mod m (m > 0, gcd(a, m) = 1).
inline Int mod_inverse(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw DomainError("mod_inverse: arguments are not coprime");
  return r;
}

// Removes from d every prime factor it shares with ell; strip(12, 2) = 3.
inline Int strip_shared_primes(Int d, const Int& ell) {
  d = abs_int(d);
  if (d == 0) return 0;
  for (Int g = gcd_int(d, ell); g > 1; g = gcd_int(d, ell)) {
    while (d % g == 0) d /= g;
  }
  return d;
}

// True iff every prime factor of n divides ell (n "ell-smooth"); 1 counts.
inline bool divides_power_of(const Int& n, const Int& ell) {
  return strip_shared_primes(n, ell) == 1;
}

// Least e >= 0 with n | ell^e; requires n ell-smooth.
inline unsigned long smooth_valuation(const Int& n, const Int& ell) {
  Int m = abs_int(n);
  if (m == 0 || !divides_power_of(m, ell))
    throw DomainError("smooth_valuation: n does not divide a power of ell");
  unsigned long e = 0;
  Int p = 1;
  while (p % m != 0) {
    p *= ell;
    ++e;
  }
  return e;
}

// Generalized binomial coefficient C(a, n) for arbitrary integer a.
inline Int binomial(const Int& a, unsigned long n) {
  Int num = 1;
  for (unsigned long i = 0; i < n; ++i) num *= a - static_cast<long>(i);
  Int den;
  mpz_fac_ui(den.get_mpz_t(), n);
  Int q;
  mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

inline bool is_prime(const Int& p) {
  return p > 1 && mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

inline std::string to_string(const Int& a) { return a.get_str(); }

// Strict decimal parse (optional leading '-').
Int parse_int(const std::string& s);

inline IntVec to_intvec(const std::vector<Int>& v) {
  IntVec r(static_cast<Index>(v.size()));
  for (Index i = 0; i < r.size(); ++i) r(i) = v[static_cast<size_t>(i)];
  return r;
}

std::string format_vec(const IntVec& v);

}  // namespace kperf
