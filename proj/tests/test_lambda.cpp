#include "kperf/lambda.hpp"

#include "support/random_gen.hpp"
#include "support/series_oracle.hpp"

#include <doctest.h>

using namespace kperf;

namespace {

IntVec uvec(const LambdaRing& r, std::vector<long> v) {
  IntVec x = IntVec::Zero(r.basis_size());
  for (size_t i = 0; i < v.size(); ++i) x(static_cast<Index>(i)) = v[i];
  return x;
}

RingElement elem(const LambdaRing& r, std::vector<long> v) { return r.element(uvec(r, v)); }

bool coords_match_upoly(const LambdaRing& r, const IntVec& coords, const testing::UPoly& p) {
  if (coords.size() != static_cast<Index>(p.size())) return false;
  IntVec q(coords.size());
  for (Index i = 0; i < q.size(); ++i) q(i) = p[static_cast<size_t>(i)];
  return r.coords_zero(coords - q);
}

}  // namespace

TEST_CASE("bundled rings load") {
  CHECK(binomial_ring().basis_size() == 1);
  LambdaRing rc2 = cyclic_two_representation_ring();
  CHECK(rc2.basis_size() == 2);
  CHECK(rc2.basis_index("x").has_value());
  LambdaRing t3 = truncated_line_ring(3);
  CHECK(t3.basis_size() == 3);
  CHECK(t3.basis_names() == std::vector<std::string>{"1", "u", "u2"});
  CHECK_FALSE(t3.load_notes().empty());
}

TEST_CASE("load rejects corrupted descriptions") {
  LambdaRing good = truncated_line_ring(3);
  SUBCASE("lambda^1(u) must equal u") {
    LambdaRing::Description d = good.description();
    d.lambda[1].table[0] = uvec(good, {0, 0, 1});  // pretend lambda^1(u) = u^2
    CHECK_THROWS_AS(LambdaRing::load(std::move(d)), LoadError);
  }
  SUBCASE("non-commutative multiplication") {
    LambdaRing::Description d = good.description();
    d.mult[1][2] = uvec(good, {1, 0, 0});  // u * u2 != u2 * u
    CHECK_THROWS_AS(LambdaRing::load(std::move(d)), LoadError);
  }
  SUBCASE("augmentation must be a ring map") {
    LambdaRing::Description d = good.description();
    d.augmentation(0, 1) = 1;  // eps(u) = 1 breaks eps(u*u) = eps(u)^2
    CHECK_THROWS_AS(LambdaRing::load(std::move(d)), LoadError);
  }
  SUBCASE("table without nilpotence must reach the cap") {
    LambdaRing::Description d = good.description();
    d.lambda[1].table.resize(3);
    d.lambda[1].rational.reset();
    CHECK_THROWS_AS(LambdaRing::load(std::move(d)), LoadError);
  }
}

TEST_CASE("lambda series against the power-series division oracle") {
  for (Index m : {2, 3, 4, 5}) {
    LambdaRing ring = truncated_line_ring(m);
    for (long j = 1; j < m; ++j) {
      testing::USeries oracle =
          testing::oracle_lambda_series_upow(static_cast<size_t>(m), j, 8);
      std::vector<long> coords(static_cast<size_t>(m), 0);
      coords[static_cast<size_t>(j)] = 1;
      auto lam = lambda_series(elem(ring, coords), 8);
      for (size_t dgr = 0; dgr <= 8; ++dgr)
        CHECK(coords_match_upoly(ring, lam[dgr].coords(), oracle[dgr]));
    }
  }
}

TEST_CASE("lambda values frozen from the oracle") {
  LambdaRing t3 = truncated_line_ring(3);
  RingElement u = t3.basis_element(1);
  CHECK(lambda_op(u, 2) == -u);        // (1+xi t)/(1+t) has t^2 coefficient -u
  CHECK(lambda_op(u, 3) == u);
  CHECK(lambda_op(t3.zero(), 2) == t3.zero());
  auto l0 = lambda_series(t3.zero(), 4);
  CHECK(l0[0] == t3.one());  // lambda_t(0) = 1
  for (size_t i = 1; i < l0.size(); ++i) CHECK(l0[i].is_zero());
  // lambda^2(1+1) = 1 from (1+t)^2
  LambdaRing z = binomial_ring();
  CHECK(lambda_op(elem(z, {2}), 2) == z.one());
  // binomial ring: lambda^n(m) = C(m, n), including negative m
  for (long mm : {-3L, -1L, 0L, 1L, 4L})
    for (unsigned long nn : {1UL, 2UL, 3UL, 4UL})
      CHECK(lambda_op(elem(z, {mm}), nn) == elem(z, {binomial(Int(mm), nn).get_si()}));
}

TEST_CASE("adams operations") {
  LambdaRing rc2 = cyclic_two_representation_ring();
  RingElement x = rc2.basis_element(1);
  SUBCASE("line elements square under psi^2") {
    CHECK(adams(x, 2) == x * x);
    CHECK(adams(x, 2) == rc2.one());  // x^2 = 1
  }
  SUBCASE("psi^2 kills 1 - x") {
    RingElement y = rc2.one() - x;
    CHECK(adams(y, 2).is_zero());
  }
  SUBCASE("psi^2(u) = 2u + u^2 in the truncated ring") {
    LambdaRing t3 = truncated_line_ring(3);
    CHECK(adams(t3.basis_element(1), 2) == elem(t3, {0, 2, 1}));
    // psi^3(u) = (1+u)^3 - 1 = 3u + 3u^2 mod u^3
    CHECK(adams(t3.basis_element(1), 3) == elem(t3, {0, 3, 3}));
  }
}

TEST_CASE("adams operations are additive, multiplicative, and compose") {
  testing::Rng rng(0x1a3b001);
  std::vector<LambdaRing> rings{binomial_ring(), cyclic_two_representation_ring(),
                                truncated_line_ring(3), truncated_line_ring(5)};
  for (const auto& ring : rings) {
    for (int iter = 0; iter < 25; ++iter) {
      RingElement a = ring.element(rng.vector(ring.basis_size(), -4, 4));
      RingElement b = ring.element(rng.vector(ring.basis_size(), -4, 4));
      for (unsigned long n : {2UL, 3UL, 4UL}) {
        CHECK(adams(a + b, n) == adams(a, n) + adams(b, n));
        CHECK(adams(a * b, n) == adams(a, n) * adams(b, n));
      }
      for (unsigned long mm : {2UL, 3UL})
        for (unsigned long nn : {2UL, 3UL})
          CHECK(adams(adams(a, nn), mm) == adams(a, mm * nn));
      CHECK(adams(a, 1) == a);
    }
    // eps(psi^n(x)) = eps(x), exactly, on all basis elements
    for (Index i = 0; i < ring.basis_size(); ++i)
      for (unsigned long n : {2UL, 3UL, 5UL})
        CHECK(ring.eps(adams(ring.basis_element(i), n).coords()) ==
              ring.eps(ring.basis_element(i).coords()));
  }
}

TEST_CASE("gamma operations") {
  LambdaRing t3 = truncated_line_ring(3);
  RingElement u = t3.basis_element(1);
  CHECK(gamma_op(u, 0) == t3.one());
  CHECK(gamma_op(u, 1) == u);
  for (unsigned long n : {2UL, 3UL, 4UL, 5UL}) CHECK(gamma_op(u, n).is_zero());

  // oracle route: gamma series = lambda series with t -> t/(1-t)
  for (Index m : {3, 4, 5}) {
    LambdaRing ring = truncated_line_ring(m);
    for (long j = 1; j < m; ++j) {
      auto lam_or = testing::oracle_lambda_series_upow(static_cast<size_t>(m), j, 8);
      auto gam_or = testing::oracle_gamma_from_lambda(lam_or, static_cast<size_t>(m));
      std::vector<long> coords(static_cast<size_t>(m), 0);
      coords[static_cast<size_t>(j)] = 1;
      for (unsigned long n = 0; n <= 8; ++n)
        CHECK(coords_match_upoly(ring, gamma_op(elem(ring, coords), n).coords(), gam_or[n]));
    }
  }
}

TEST_CASE("gamma^2(1-x) doubles in the C2 representation ring") {
  // lambda_t(2 - x) = (1+t)^2 (1+xt)^{-1} has t^2 coefficient
  // x^2 - 2x + 1 = 2 - 2x, so gamma^2(1-x) = 2(1-x); this is what keeps the
  // filtration from terminating.
  LambdaRing rc2 = cyclic_two_representation_ring();
  RingElement y = rc2.one() - rc2.basis_element(1);
  CHECK(gamma_op(y, 2) == y * Int(2));
  RingElement g = y;
  for (unsigned long n = 2; n <= 8; ++n) {
    CHECK(gamma_op(y, n) == y * pow_int(2, n - 1));
    g = g * y;  // (1-x)^n = 2^{n-1}(1-x) by induction in the ring
    CHECK(g == y * pow_int(2, n - 1));
  }
}

TEST_CASE("augmentation kernel of the truncated ring has the expected basis") {
  LambdaRing t3 = truncated_line_ring(3);
  auto ker = augmentation_kernel(t3);
  CHECK(ker.group.free_rank() == 2);
  REQUIRE(ker.map.matrix().cols() == 2);
  CHECK(ker.map.matrix().col(0) == uvec(t3, {0, 1, 0}));  // u
  CHECK(ker.map.matrix().col(1) == uvec(t3, {0, 0, 1}));  // u^2
}

TEST_CASE("gamma filtration of the truncated rings is finite") {
  LambdaRing t3 = truncated_line_ring(3);
  GammaFiltration f = gamma_filtration(t3, 8);
  CHECK(f.finite);
  CHECK(f.finite_at == 3);
  const AbelianGroup& add = t3.additive_group();
  // F^1 = (u, u^2), F^2 = (u^2)
  IntMat f1(3, 2);
  f1.col(0) = uvec(t3, {0, 1, 0});
  f1.col(1) = uvec(t3, {0, 0, 1});
  CHECK(sublattices_equal(add, f.step_gens[1], f1));
  IntMat f2(3, 1);
  f2.col(0) = uvec(t3, {0, 0, 1});
  CHECK(sublattices_equal(add, f.step_gens[2], f2));
  for (Index c = 0; c < f.step_gens[3].cols(); ++c)
    CHECK(add.is_zero(f.step_gens[3].col(c)));

  for (Index m : {2, 4, 5, 6}) {
    GammaFiltration fm = gamma_filtration(truncated_line_ring(m), 8);
    CHECK(fm.finite);
    CHECK(fm.finite_at == m);
  }
}

TEST_CASE("filtration steps are nested ideals") {
  for (const auto& ring : {truncated_line_ring(4), cyclic_two_representation_ring()}) {
    GammaFiltration f = gamma_filtration(ring, 6);
    const AbelianGroup& add = ring.additive_group();
    for (size_t n = 0; n + 1 < f.step_gens.size(); ++n) {
      const IntMat& next = f.step_gens[n + 1];
      for (Index c = 0; c < next.cols(); ++c)
        CHECK(sublattice_contains(add, f.step_gens[n], next.col(c)));
    }
    // F^a * F^b lies in F^{a+b} on computed generators
    for (size_t a = 1; a <= 2; ++a)
      for (size_t b = 1; a + b < f.step_gens.size(); ++b)
        for (Index i = 0; i < f.step_gens[a].cols(); ++i)
          for (Index j = 0; j < f.step_gens[b].cols(); ++j) {
            IntVec prod = ring.mul(f.step_gens[a].col(i), f.step_gens[b].col(j));
            CHECK(sublattice_contains(add, f.step_gens[a + b], prod));
          }
  }
}

TEST_CASE("gamma filtration of R(C2) is inconclusive with certified nonzero F^8") {
  LambdaRing rc2 = cyclic_two_representation_ring();
  GammaFiltration f = gamma_filtration(rc2, 8);
  CHECK_FALSE(f.finite);
  CHECK(f.cap == 8);
  // The kernel generator comes out as x - 1, a line-minus-one element, so its
  // own gamma tail dies at weight 1; what blocks finiteness are the powers
  // (x-1)^k = +-2^{k-1}(1-x).
  auto ker = augmentation_kernel(rc2);
  REQUIRE(ker.map.matrix().cols() == 1);
  CHECK(ker.map.matrix().col(0) == (rc2.basis_element(1) - rc2.one()).coords());
  REQUIRE(f.tail_bounds.size() == 1);
  CHECK(f.tail_bounds[0] == 1);
  for (unsigned long n = 2; n <= 6; ++n)
    CHECK(gamma_op(rc2.basis_element(1) - rc2.one(), n).is_zero());
  const AbelianGroup& add = rc2.additive_group();
  RingElement y = rc2.one() - rc2.basis_element(1);
  for (unsigned long n = 1; n <= 8; ++n) {
    // computed F^n equals 2^{n-1} (1-x) Z, certifying F^8 != 0
    IntMat expect(2, 1);
    expect.col(0) = (y * pow_int(2, n - 1)).coords();
    CHECK(sublattices_equal(add, f.step_gens[n], expect));
  }
  bool f8_nonzero = false;
  for (Index c = 0; c < f.step_gens[8].cols(); ++c)
    if (!add.is_zero(f.step_gens[8].col(c))) f8_nonzero = true;
  CHECK(f8_nonzero);
}

TEST_CASE("binomial ring filtration is FINITE(1)") {
  GammaFiltration f = gamma_filtration(binomial_ring(), 4);
  CHECK(f.finite);
  CHECK(f.finite_at == 1);
}

TEST_CASE("lowering the cap turns FINITE into INCONCLUSIVE, not failure") {
  GammaFiltration f = gamma_filtration(truncated_line_ring(3), 2);
  CHECK_FALSE(f.finite);
  CHECK(f.cap == 2);
}

TEST_CASE("graded adams action") {
  LambdaRing t3 = truncated_line_ring(3);
  GammaFiltration f = gamma_filtration(t3, 8);
  SUBCASE("psi^2 acts as 2^n on the truncated ring") {
    GradedAdamsReport rep = verify_graded_adams(t3, 2, f);
    CHECK(rep.ok);
    CHECK(rep.levels.size() == 3);  // levels 0, 1, 2
    // frozen: psi^2(u) - 2u = u^2 in F^2; psi^2(u^2) - 4u^2 = 0
    RingElement u = t3.basis_element(1);
    CHECK(adams(u, 2) - u * Int(2) == u * u);
    RingElement u2 = t3.basis_element(2);
    CHECK((adams(u2, 2) - u2 * Int(4)).is_zero());
  }
  SUBCASE("whole family passes for ell in {2, 3}") {
    for (Index m : {2, 3, 4, 5, 6}) {
      LambdaRing ring = truncated_line_ring(m);
      GammaFiltration fm = gamma_filtration(ring, 8);
      REQUIRE(fm.finite);
      for (long ell : {2L, 3L}) CHECK(verify_graded_adams(ring, ell, fm).ok);
    }
  }
  SUBCASE("refuses inconclusive filtrations") {
    LambdaRing rc2 = cyclic_two_representation_ring();
    GammaFiltration frc2 = gamma_filtration(rc2, 8);
    CHECK_THROWS_AS(verify_graded_adams(rc2, 2, frc2), DomainError);
  }
}

TEST_CASE("proposition verification on the truncated ring") {
  LambdaRing t3 = truncated_line_ring(3);
  PropLambdaReport rep = verify_prop_lambda(t3, 2);
  CHECK(rep.preserves_kernel);
  CHECK(rep.overall);
  CHECK(rep.lemell.overall);
  // the restriction of psi^2 to ker eps in the basis (u, u^2) is exactly the
  // 2x2 example matrix
  REQUIRE(rep.restricted_matrix.rows() == 2);
  IntMat expect(2, 2);
  expect << 2, 0, 1, 4;
  CHECK(rep.restricted_matrix == expect);
  CHECK(rep.localization == "Z[1/2]^2");
  CHECK(rep.kernel_group.free_rank() == 2);
}

TEST_CASE("proposition fails on R(C2): psi^2 = 0 on ker eps") {
  LambdaRing rc2 = cyclic_two_representation_ring();
  PropLambdaReport rep = verify_prop_lambda(rc2, 2);
  CHECK(rep.preserves_kernel);
  CHECK_FALSE(rep.overall);
  CHECK_FALSE(rep.lemell.cond_a.ok);
  REQUIRE(rep.restricted_matrix.size() == 1);
  CHECK(rep.restricted_matrix(0, 0) == 0);
  CHECK(rep.colimit_trivial);  // colim of the zero map vanishes
  CHECK(rep.localization == "Z[1/2]");
  // the filtration is inconclusive here, so no consistency obligation
  GammaFiltration f = gamma_filtration(rc2, 8);
  PropLambdaReport rep2 = verify_prop_lambda(rc2, 2, f);
  CHECK(rep2.filtration_finite.has_value());
  CHECK_FALSE(*rep2.filtration_finite);
  CHECK(rep2.consistent_with_filtration);
}

TEST_CASE("trivial augmentation kernel is trivially fine") {
  PropLambdaReport rep = verify_prop_lambda(binomial_ring(), 3);
  CHECK(rep.overall);
  CHECK(rep.kernel_group.is_trivial());
}

TEST_CASE("finite filtration plus graded action forces the proposition") {
  for (Index m : {2, 3, 4, 5, 6}) {
    LambdaRing ring = truncated_line_ring(m);
    GammaFiltration f = gamma_filtration(ring, 8);
    for (long ell : {2L, 3L}) {
      if (!f.finite || !verify_graded_adams(ring, ell, f).ok) continue;
      PropLambdaReport rep = verify_prop_lambda(ring, ell, f);
      CHECK(rep.overall);
      CHECK(rep.consistent_with_filtration);
    }
  }
}
