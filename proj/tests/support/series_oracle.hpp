#pragma once

// Independent truncated power-series arithmetic over Z[u]/(u^m) with plain
// long coefficients, used to freeze lambda/gamma values for the bundled
// rings. Shares nothing with the library's series engine.

#include <cassert>
#include <vector>

namespace kperf::testing {

using UPoly = std::vector<long>;  // coefficients of 1, u, u^2, ...; length m

inline UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  size_t m = a.size();
  UPoly r(m, 0);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; i + j < m; ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline UPoly upoly_scale(long s, const UPoly& a) {
  UPoly r = a;
  for (auto& x : r) x *= s;
  return r;
}

inline UPoly upoly_add(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

using USeries = std::vector<UPoly>;  // coefficient of t^k at index k

inline USeries useries_one(size_t m, size_t deg) {
  USeries s(deg + 1, UPoly(m, 0));
  s[0][0] = 1;
  return s;
}

inline USeries useries_mul(const USeries& a, const USeries& b, size_t m) {
  size_t deg = a.size() - 1;
  USeries r(deg + 1, UPoly(m, 0));
  for (size_t i = 0; i <= deg; ++i)
    for (size_t j = 0; i + j <= deg; ++j) r[i + j] = upoly_add(r[i + j], upoly_mul(a[i], b[j]));
  return r;
}

// inverse of a series with constant term 1
inline USeries useries_inv(const USeries& a, size_t m) {
  size_t deg = a.size() - 1;
  USeries r = useries_one(m, deg);
  for (size_t k = 1; k <= deg; ++k) {
    UPoly acc(m, 0);
    for (size_t i = 1; i <= k; ++i) acc = upoly_add(acc, upoly_mul(a[i], r[k - i]));
    r[k] = upoly_scale(-1, acc);
  }
  return r;
}

// lambda_t(u^j) in Z[u]/(u^m) from the line decomposition
// u^j = sum_a C(j,a) (-1)^{j-a} xi^a with lambda_t(xi^a) = 1 + xi^a t.
inline USeries oracle_lambda_series_upow(size_t m, long j, size_t deg) {
  auto binom = [](long nn, long kk) {
    long r = 1;
    for (long i = 0; i < kk; ++i) r = r * (nn - i) / (i + 1);
    return r;
  };
  // xi^a = (1+u)^a
  auto xi_pow = [&](long a) {
    UPoly p(m, 0);
    for (size_t k = 0; k < m && static_cast<long>(k) <= a; ++k)
      p[k] = binom(a, static_cast<long>(k));
    return p;
  };
  USeries acc = useries_one(m, deg);
  for (long a = 0; a <= j; ++a) {
    USeries line = useries_one(m, deg);
    if (deg >= 1) line[1] = xi_pow(a);
    long e = binom(j, a);
    bool inverse = ((j - a) % 2 != 0);
    USeries factor = inverse ? useries_inv(line, m) : line;
    for (long t = 0; t < e; ++t) acc = useries_mul(acc, factor, m);
  }
  return acc;
}

// gamma_t(x) = lambda_{t/(1-t)}(x): substitute and re-expand.
inline USeries oracle_gamma_from_lambda(const USeries& lam, size_t m) {
  size_t deg = lam.size() - 1;
  auto binom = [](long nn, long kk) {
    if (kk < 0 || nn < kk) return 0L;
    long r = 1;
    for (long i = 0; i < kk; ++i) r = r * (nn - i) / (i + 1);
    return r;
  };
  USeries out(deg + 1, UPoly(m, 0));
  out[0] = lam[0];
  for (size_t k = 1; k <= deg; ++k) {
    UPoly acc(m, 0);
    // (t/(1-t))^i = sum_{k>=i} C(k-1, i-1) t^k
    for (size_t i = 1; i <= k; ++i)
      acc = upoly_add(acc, upoly_scale(binom(static_cast<long>(k) - 1, static_cast<long>(i) - 1), lam[i]));
    out[k] = acc;
  }
  return out;
}

}  // namespace kperf::testing
