#include "kperf/snf.hpp"

#include <algorithm>
#include <cctype>

namespace kperf {

Int parse_int(const std::string& s) {
  if (s.empty()) throw LoadError("empty integer literal");
  size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw LoadError("bad integer literal '" + s + "'");
  for (size_t i = start; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw LoadError("bad integer literal '" + s + "'");
  return Int(s, 10);
}

std::string format_vec(const IntVec& v) {
  std::string s = "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v(i).get_str();
  }
  return s + ")";
}

IntMat hstack(const IntMat& a, const IntMat& b) {
  if (a.cols() == 0 && a.rows() == 0) return b;
  if (b.cols() == 0 && b.rows() == 0) return a;
  if (a.rows() != b.rows()) throw DomainError("hstack: row mismatch");
  IntMat r(a.rows(), a.cols() + b.cols());
  r.leftCols(a.cols()) = a;
  r.rightCols(b.cols()) = b;
  return r;
}

IntMat vstack(const IntMat& a, const IntMat& b) {
  if (a.rows() == 0 && a.cols() == 0) return b;
  if (b.rows() == 0 && b.cols() == 0) return a;
  if (a.cols() != b.cols()) throw DomainError("vstack: column mismatch");
  IntMat r(a.rows() + b.rows(), a.cols());
  r.topRows(a.rows()) = a;
  r.bottomRows(b.rows()) = b;
  return r;
}

namespace {

// Elementary operations applied simultaneously to d and the transform pair.
// For row ops u tracks E*u and u_inv tracks u_inv*E^{-1}; columns mirror it.
struct SnfWork {
  IntMat d, u, u_inv, v, v_inv;

  void row_swap(Index i, Index j) {
    if (i == j) return;
    d.row(i).swap(d.row(j));
    u.row(i).swap(u.row(j));
    u_inv.col(i).swap(u_inv.col(j));
  }
  void col_swap(Index i, Index j) {
    if (i == j) return;
    d.col(i).swap(d.col(j));
    v.col(i).swap(v.col(j));
    v_inv.row(i).swap(v_inv.row(j));
  }
  // row i += q * row j
  void row_add(Index i, Index j, const Int& q) {
    d.row(i) += q * d.row(j);
    u.row(i) += q * u.row(j);
    u_inv.col(j) -= q * u_inv.col(i);
  }
  // col j += q * col i
  void col_add(Index j, Index i, const Int& q) {
    d.col(j) += q * d.col(i);
    v.col(j) += q * v.col(i);
    v_inv.row(i) -= q * v_inv.row(j);
  }
  void row_negate(Index i) {
    d.row(i) = -d.row(i);
    u.row(i) = -u.row(i);
    u_inv.col(i) = -u_inv.col(i);
  }
};

// Minimal nonzero |entry| in the trailing submatrix, row-major tie-break.
bool find_pivot(const IntMat& d, Index s, Index& pi, Index& pj) {
  bool found = false;
  Int best = 0;
  for (Index i = s; i < d.rows(); ++i) {
    for (Index j = s; j < d.cols(); ++j) {
      if (d(i, j) == 0) continue;
      Int a = abs_int(d(i, j));
      if (!found || a < best) {
        found = true;
        best = a;
        pi = i;
        pj = j;
        if (best == 1) return true;
      }
    }
  }
  return found;
}

}  // namespace

SmithForm smith_normal_form(const IntMat& a) {
  const Index m = a.rows(), n = a.cols();
  SnfWork w{a, IntMat::Identity(m, m), IntMat::Identity(m, m),
            IntMat::Identity(n, n), IntMat::Identity(n, n)};
  IntMat& d = w.d;

  const Index t = std::min(m, n);
  for (Index s = 0; s < t; ++s) {
    Index pi = s, pj = s;
    if (!find_pivot(d, s, pi, pj)) break;  // trailing submatrix is zero
    for (;;) {
      w.row_swap(s, pi);
      w.col_swap(s, pj);
      bool dirty = false;
      for (Index i = s + 1; i < m; ++i) {
        if (d(i, s) == 0) continue;
        Int q = d(i, s) / d(s, s);
        if (q != 0) w.row_add(i, s, -q);
        if (d(i, s) != 0) dirty = true;
      }
      for (Index j = s + 1; j < n; ++j) {
        if (d(s, j) == 0) continue;
        Int q = d(s, j) / d(s, s);
        if (q != 0) w.col_add(j, s, -q);
        if (d(s, j) != 0) dirty = true;
      }
      if (!dirty) {
        // Lone pivot; enforce that it divides the trailing submatrix so the
        // diagonal comes out as a divisibility chain.
        Index bi = -1;
        for (Index i = s + 1; i < m && bi < 0; ++i)
          for (Index j = s + 1; j < n; ++j)
            if (d(i, j) % d(s, s) != 0) {
              bi = i;
              break;
            }
        if (bi < 0) break;
        w.row_add(s, bi, 1);
      }
      if (!find_pivot(d, s, pi, pj)) break;
    }
    if (d(s, s) < 0) w.row_negate(s);
  }

  SmithForm f;
  f.d = std::move(w.d);
  f.u = std::move(w.u);
  f.u_inv = std::move(w.u_inv);
  f.v = std::move(w.v);
  f.v_inv = std::move(w.v_inv);
  for (Index i = 0; i < t; ++i) {
    if (f.d(i, i) == 0) break;
    f.invariant_factors.push_back(f.d(i, i));
  }
  return f;
}

Int determinant(IntMat a) {
  const Index n = a.rows();
  if (n != a.cols()) throw DomainError("determinant: matrix not square");
  if (n == 0) return 1;
  int sign = 1;
  Int prev = 1;
  for (Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Index r = -1;
      for (Index i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          r = i;
          break;
        }
      if (r < 0) return 0;
      a.row(k).swap(a.row(r));
      sign = -sign;
    }
    for (Index i = k + 1; i < n; ++i) {
      for (Index j = k + 1; j < n; ++j) {
        Int num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::optional<IntVec> solve_linear(const IntMat& a, const IntVec& b) {
  if (a.rows() != b.size()) throw DomainError("solve_linear: dimension mismatch");
  SmithForm f = smith_normal_form(a);
  IntVec c = f.u * b;
  const Index t = std::min(a.rows(), a.cols());
  IntVec wv = IntVec::Zero(a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    Int di = i < t ? f.d(i, i) : Int(0);
    if (di == 0) {
      if (c(i) != 0) return std::nullopt;
    } else {
      if (c(i) % di != 0) return std::nullopt;
      wv(i) = c(i) / di;
    }
  }
  return IntVec(f.v * wv);
}

IntMat kernel_basis(const IntMat& a) {
  SmithForm f = smith_normal_form(a);
  const Index t = std::min(a.rows(), a.cols());
  std::vector<Index> zero_cols;
  for (Index j = 0; j < a.cols(); ++j)
    if (j >= t || f.d(j, j) == 0) zero_cols.push_back(j);
  IntMat k(a.cols(), static_cast<Index>(zero_cols.size()));
  for (Index c = 0; c < k.cols(); ++c)
    k.col(c) = f.v.col(zero_cols[static_cast<size_t>(c)]);
  return k;
}

bool in_column_lattice(const IntMat& a, const IntVec& b) {
  return solve_linear(a, b).has_value();
}

}  // namespace kperf
